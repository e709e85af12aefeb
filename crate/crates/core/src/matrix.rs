//! Dense exact square matrices over the rationals: arithmetic, fraction-free
//! determinants, characteristic polynomials, rank/kernel, and minors.
//!
//! Entries are addressed 0-based in code. Anything user-facing (minor
//! specifications, serialized certificates, error messages) is 1-based to
//! match the usual conventions of the underlying linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Rat, UniPoly};

/// A square matrix of rationals, immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct MatQ {
    dim: usize,
    entries: Vec<Rat>, // row-major, dim * dim
}

impl MatQ {
    pub fn new(dim: usize, entries: Vec<Rat>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(Error::MalformedEntries { dim });
        }
        Ok(MatQ { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::MalformedEntries { dim });
        }
        Ok(MatQ {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from integer rows; convenient in tests and examples.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        assert!(dim >= 1);
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        MatQ { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Rat::zero())
    }

    /// The nilpotent single Jordan block: ones on the superdiagonal.
    pub fn nilpotent_block(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if j == i + 1 { Rat::one() } else { Rat::zero() })
    }

    /// `I + N`, the canonical unipotent single Jordan block.
    pub fn unipotent_block(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j || j == i + 1 {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Rat::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 0-based entry access.
    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.dim + j]
    }

    /// 1-based entry access extended by zero outside `1..=dim` in either
    /// coordinate; this is the convention used by the index trace formula.
    pub fn entry_or_zero(&self, i: i64, j: i64) -> Rat {
        let d = self.dim as i64;
        if i < 1 || j < 1 || i > d || j > d {
            Rat::zero()
        } else {
            self.entry(i as usize - 1, j as usize - 1).clone()
        }
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.dim).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn from_cols(cols: Vec<Vec<Rat>>) -> Result<Self> {
        let dim = cols.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::MalformedEntries { dim });
        }
        Ok(Self::from_fn(dim, |i, j| cols[j][i].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    fn check_same_dim(&self, other: &MatQ) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MatQ) -> Result<MatQ> {
        self.check_same_dim(other)?;
        Ok(MatQ {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &MatQ) -> Result<MatQ> {
        self.check_same_dim(other)?;
        Ok(MatQ {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, by: &Rat) -> MatQ {
        MatQ {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * by).collect(),
        }
    }

    pub fn mat_mul(&self, other: &MatQ) -> Result<MatQ> {
        self.check_same_dim(other)?;
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Rat::zero();
                for k in 0..d {
                    let a = self.entry(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + &(a * other.entry(k, j));
                }
                entries.push(acc);
            }
        }
        Ok(MatQ { dim: d, entries })
    }

    /// `A^k` by binary exponentiation; `A^0` is the identity.
    pub fn mat_pow(&self, k: u64) -> MatQ {
        let mut result = MatQ::identity(self.dim);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mat_mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mat_mul(&base).unwrap();
            }
        }
        result
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.dim {
                    let a = self.entry(i, j);
                    if !a.is_zero() {
                        acc = acc + &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.dim {
            acc = acc + self.entry(i, i);
        }
        acc
    }

    /// Exact determinant by fraction-free (Bareiss) elimination: rows are
    /// first scaled to integers, then all divisions in the elimination are
    /// exact integer divisions.
    pub fn det(&self) -> Rat {
        let n = self.dim;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut l = BigInt::one();
            for j in 0..n {
                l = l.lcm(self.entry(i, j).denom());
            }
            m.push(
                (0..n)
                    .map(|j| {
                        let e = self.entry(i, j);
                        e.numer() * (&l / e.denom())
                    })
                    .collect(),
            );
            scale *= l;
        }

        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(swap) => {
                        m.swap(k, swap);
                        sign = -sign;
                    }
                    None => return Rat::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact by Bareiss
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det_int = m[n - 1][n - 1].clone() * BigInt::from(sign);
        Rat::new(det_int, scale).unwrap()
    }

    /// Monic characteristic polynomial `det(xI - A)` by the
    /// Faddeev-LeVerrier recurrence (only divisions by integers occur).
    pub fn char_poly(&self) -> UniPoly {
        let n = self.dim;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = MatQ::zero(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = self
                .mat_mul(&m)
                .unwrap()
                .add(&MatQ::identity(n).scale(&coeffs[n - k + 1]))
                .unwrap();
            let t = self.mat_mul(&m).unwrap().trace();
            coeffs[n - k] = -(t / Rat::from(k as i64));
        }
        UniPoly::new(coeffs)
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let n = self.dim;
        let mut rows = self.rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip().unwrap();
            for j in 0..n {
                rows[r][j] = &rows[r][j] * &inv;
            }
            for i in 0..n {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..n {
                        rows[i][j] = &rows[i][j] - &(&f * &rows[r][j]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == n {
                break;
            }
        }
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space; `dim - rank` vectors, each satisfying
    /// `A v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let n = self.dim;
        let (rows, pivots) = self.rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); n];
                v[f] = Rat::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&rows[r][f];
                }
                v
            })
            .collect()
    }

    /// Exact inverse via Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<MatQ> {
        let n = self.dim;
        let mut left = self.rows();
        let mut right = MatQ::identity(n).rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !left[i][c].is_zero())
                .ok_or(Error::Singular)?;
            left.swap(c, p);
            right.swap(c, p);
            let inv = left[c][c].recip().unwrap();
            for j in 0..n {
                left[c][j] = &left[c][j] * &inv;
                right[c][j] = &right[c][j] * &inv;
            }
            for i in 0..n {
                if i != c && !left[i][c].is_zero() {
                    let f = left[i][c].clone();
                    for j in 0..n {
                        left[i][j] = &left[i][j] - &(&f * &left[c][j]);
                        right[i][j] = &right[i][j] - &(&f * &right[c][j]);
                    }
                }
            }
        }
        MatQ::from_rows(right)
    }

    /// Determinant of the submatrix selected by `spec` (1-based indices).
    pub fn minor_det(&self, spec: &MinorSpec) -> Result<Rat> {
        spec.check_in_range(self.dim)?;
        let size = spec.rows.len();
        let sub = MatQ::from_fn(size, |i, j| {
            self.entry(spec.rows[i] - 1, spec.cols[j] - 1).clone()
        });
        Ok(sub.det())
    }
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatQ(dim={})", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Evaluates a polynomial at a matrix argument (matrix substitution).
pub fn poly_at_matrix(p: &UniPoly, a: &MatQ) -> MatQ {
    let mut acc = MatQ::zero(a.dim());
    for c in p.coeffs().iter().rev() {
        acc = acc
            .mat_mul(a)
            .unwrap()
            .add(&MatQ::identity(a.dim()).scale(c))
            .unwrap();
    }
    acc
}

/// Row and column index sets selecting a square minor; 1-based, strictly
/// increasing, of equal nonzero size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::MalformedMinor);
        }
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]) && v[0] >= 1;
        if !increasing(&rows) || !increasing(&cols) {
            return Err(Error::MalformedMinor);
        }
        Ok(MinorSpec { rows, cols })
    }

    pub fn full(dim: usize) -> Self {
        let all: Vec<usize> = (1..=dim).collect();
        MinorSpec {
            rows: all.clone(),
            cols: all,
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    fn check_in_range(&self, dim: usize) -> Result<()> {
        if self.rows.last().copied().unwrap_or(0) > dim
            || self.cols.last().copied().unwrap_or(0) > dim
        {
            return Err(Error::MinorOutOfRange { dim });
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for MinorSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: Vec<usize>,
            cols: Vec<usize>,
        }
        let r = Repr::deserialize(deserializer)?;
        MinorSpec::new(r.rows, r.cols).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatQRepr {
    dim: usize,
    entries: Vec<Vec<Rat>>,
}

impl Serialize for MatQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatQRepr {
            dim: self.dim,
            entries: self.rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = MatQRepr::deserialize(deserializer)?;
        if r.entries.len() != r.dim {
            return Err(serde::de::Error::custom(Error::MalformedEntries {
                dim: r.dim,
            }));
        }
        MatQ::from_rows(r.entries).map_err(serde::de::Error::custom)
    }
}
