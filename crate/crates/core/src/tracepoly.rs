//! Exact expansion of `tr((A B^n)^k)` as a polynomial in `n` for a
//! unipotent single-block `B = I + N`, and the finite decision procedure
//! for the hypothesis that these traces are independent of `n` for all `k`.
//!
//! With `N = B - I` nilpotent, `A B^n = sum_i C(n,i) A N^i`, so
//! `(A B^n)^k` expands over compositions `(i_1, ..., i_k)` with parts in
//! `0..=m` into terms `C(n,i_1)...C(n,i_k) * A N^{i_1} ... A N^{i_k}`.
//! The implementation evaluates this sum in factored form, as the trace of
//! the k-th power of the matrix `sum_i C(n,i) A N^i` whose entries are
//! polynomials in `n`; by multilinearity that product expands into exactly
//! the composition sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binom_poly, poly_interpolate, Rat, UniPoly};
use crate::matrix::MatQ;
use crate::unipotent::{
    is_quasi_unipotent, jordan_basis_single_block, single_jordan_block_eigenvalue,
};

/// The trace of `(A B^n)^k` as an exact polynomial in `n`; its degree is
/// at most `k*m` where `dim = m + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoly {
    pub k: u32,
    #[serde(rename = "coeffs")]
    pub poly: UniPoly,
}

/// Failure witness: two exponents where the trace differs. The traces
/// refer to the unipotent power of `B` used internally by the verifier
/// (which is `B` itself whenever `B` is already unipotent); conjugation to
/// the Jordan basis does not change them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceWitness {
    pub k: u32,
    pub n1: u64,
    pub n2: u64,
    pub t1: Rat,
    pub t2: Rat,
}

/// Verdict of the finite decision procedure for trace constancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub verdict: bool,
    pub checked_k: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<TraceWitness>,
}

/// A square matrix with univariate polynomial entries; just enough to take
/// powers and traces.
struct PolyMat {
    dim: usize,
    entries: Vec<UniPoly>,
}

impl PolyMat {
    fn entry(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i * self.dim + j]
    }

    fn mul(&self, other: &PolyMat) -> PolyMat {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = UniPoly::zero();
                for k in 0..d {
                    let a = self.entry(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.entry(k, j));
                }
                entries.push(acc);
            }
        }
        PolyMat { dim: d, entries }
    }

    fn trace(&self) -> UniPoly {
        let mut acc = UniPoly::zero();
        for i in 0..self.dim {
            acc = &acc + self.entry(i, i);
        }
        acc
    }
}

fn require_unipotent_single_block(b: &MatQ) -> Result<()> {
    if single_jordan_block_eigenvalue(b) != Some(Rat::one()) {
        return Err(Error::NotUnipotentSingleBlock);
    }
    Ok(())
}

/// `sum_i C(n,i) * (A N^i)` as a matrix of polynomials in `n`, where
/// `N = B - I`.
fn expansion_matrix(a: &MatQ, b: &MatQ) -> PolyMat {
    let d = a.dim();
    let m = d - 1;
    let n_mat = b.sub(&MatQ::identity(d)).unwrap();
    let binoms: Vec<UniPoly> = (0..=m).map(binom_poly).collect();

    let mut shifted = a.clone(); // A N^0
    let mut entries = vec![UniPoly::zero(); d * d];
    for (i, bp) in binoms.iter().enumerate() {
        for row in 0..d {
            for col in 0..d {
                let e = shifted.entry(row, col);
                if !e.is_zero() {
                    let t = &entries[row * d + col] + &bp.scale(e);
                    entries[row * d + col] = t;
                }
            }
        }
        if i < m {
            shifted = shifted.mat_mul(&n_mat).unwrap();
        }
    }
    PolyMat { dim: d, entries }
}

/// Expands `tr((A B^n)^k)` exactly, for unipotent single-block `B`.
pub fn expand_trace_poly(a: &MatQ, b: &MatQ, k: u32) -> Result<TracePoly> {
    Ok(expand_trace_polys_up_to(a, b, k)?.pop().unwrap())
}

/// Expands `tr((A B^n)^k)` for every `k` in `1..=kmax`, sharing the
/// intermediate powers.
pub fn expand_trace_polys_up_to(a: &MatQ, b: &MatQ, kmax: u32) -> Result<Vec<TracePoly>> {
    if kmax == 0 {
        return Err(Error::PositiveKRequired);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    require_unipotent_single_block(b)?;
    let m = a.dim() - 1;
    let base = expansion_matrix(a, b);
    let mut out = Vec::with_capacity(kmax as usize);
    let mut power = PolyMat {
        dim: base.dim,
        entries: base.entries.clone(),
    };
    for k in 1..=kmax {
        if k > 1 {
            power = power.mul(&base);
        }
        let poly = power.trace();
        debug_assert!(
            poly.degree().unwrap_or(0) <= k as usize * m,
            "trace polynomial degree bound k*m violated"
        );
        out.push(TracePoly { k, poly });
    }
    Ok(out)
}

/// Independent oracle for `expand_trace_poly`: evaluates the trace
/// numerically at `n = 0, ..., k*m + 1` and interpolates. Must agree with
/// the expansion exactly.
pub fn trace_poly_interpolated(a: &MatQ, b: &MatQ, k: u32) -> Result<TracePoly> {
    if k == 0 {
        return Err(Error::PositiveKRequired);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    require_unipotent_single_block(b)?;
    let m = a.dim() - 1;
    let samples = k as usize * m + 2;
    let mut points = Vec::with_capacity(samples);
    let mut b_pow = MatQ::identity(b.dim());
    for n in 0..samples {
        if n > 0 {
            b_pow = b_pow.mat_mul(b).unwrap();
        }
        let value = a.mat_mul(&b_pow).unwrap().mat_pow(k as u64).trace();
        points.push((Rat::from(n as i64), value));
    }
    Ok(TracePoly {
        k,
        poly: poly_interpolate(&points)?,
    })
}

/// Decides whether `tr((A B^n)^k)` is independent of `n` for every `k`.
///
/// Preconditions (each failure is a distinct error, never a `false`
/// verdict): `A` quasi-unipotent, `B` a single Jordan block. Internally
/// `B` is replaced by its unipotent power and both matrices are conjugated
/// to the Jordan basis, which changes no trace.
///
/// Checking `k <= m + 1` suffices: if the first `m + 1` power-sum traces
/// of `A B^n` are constant polynomials in `n`, Newton's identities over a
/// characteristic-zero field make every coefficient of the characteristic
/// polynomial of `A B^n` constant as well, and with it every higher power
/// sum.
pub fn hypothesis_verifier(a: &MatQ, b: &MatQ) -> Result<HypothesisReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if !is_quasi_unipotent(a).is_quasi_unipotent {
        return Err(Error::NotQuasiUnipotent { role: "A" });
    }
    let eigenvalue =
        single_jordan_block_eigenvalue(b).ok_or(Error::NotSingleJordanBlock { role: "B" })?;
    let b_unipotent = if eigenvalue == Rat::one() {
        b.clone()
    } else {
        // Squaring a single block with eigenvalue -1 yields a unipotent
        // single block of the same dimension; verified, not assumed.
        let squared = b.mat_mul(b)?;
        if single_jordan_block_eigenvalue(&squared) != Some(Rat::one()) {
            return Err(Error::TheoremFalsified {
                context: "square of a single block with eigenvalue -1 is not a unipotent single block".into(),
            });
        }
        squared
    };
    let p = jordan_basis_single_block(&b_unipotent)?;
    let p_inv = p.inverse()?;
    let a_conj = p_inv.mat_mul(a)?.mat_mul(&p)?;
    let b_conj = p_inv.mat_mul(&b_unipotent)?.mat_mul(&p)?;

    let kmax = a.dim() as u32;
    let polys = expand_trace_polys_up_to(&a_conj, &b_conj, kmax)?;
    let mut checked = Vec::new();
    for tp in &polys {
        checked.push(tp.k);
        if tp.poly.is_constant() {
            continue;
        }
        // A nonconstant polynomial differs from its value at 0 somewhere
        // in 1..=degree. Witness traces are recomputed directly.
        let at0 = tp.poly.eval_i64(0);
        let degree = tp.poly.degree().unwrap();
        let n2 = (1..=degree as i64)
            .find(|&n| tp.poly.eval_i64(n) != at0)
            .expect("nonconstant polynomial must deviate from its value at 0");
        let direct = |n: u64| -> Rat {
            a_conj
                .mat_mul(&b_conj.mat_pow(n))
                .unwrap()
                .mat_pow(tp.k as u64)
                .trace()
        };
        let t1 = direct(0);
        let t2 = direct(n2 as u64);
        debug_assert_eq!(t1, at0);
        debug_assert_eq!(t2, tp.poly.eval_i64(n2));
        return Ok(HypothesisReport {
            verdict: false,
            checked_k: checked,
            witness: Some(TraceWitness {
                k: tp.k,
                n1: 0,
                n2: n2 as u64,
                t1,
                t2,
            }),
        });
    }
    Ok(HypothesisReport {
        verdict: true,
        checked_k: checked,
        witness: None,
    })
}

/// Evidence-mode check of the original family form of the hypothesis:
/// whether `A B^n` is quasi-unipotent for every `n` in `0..=nmax`.
/// Sound for refutation; a `true` is sampling evidence, not a proof for
/// all `n`.
pub fn sampled_qu_family_check(a: &MatQ, b: &MatQ, nmax: u64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut b_pow = MatQ::identity(b.dim());
    for n in 0..=nmax {
        if n > 0 {
            b_pow = b_pow.mat_mul(b)?;
        }
        if !is_quasi_unipotent(&a.mat_mul(&b_pow)?).is_quasi_unipotent {
            return Ok(false);
        }
    }
    Ok(true)
}
