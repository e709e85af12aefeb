//! Combinatorial core: the cyclic `p_k` polynomials and their trace
//! reformulation, the inverse-factorial matrix and its binomial rescaling,
//! the lower triangular Pascal matrix with its bidiagonal factorization,
//! total nonnegativity scans, the Cauchy-Binet identity, and positivity
//! chains for binomial minors.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binom, inv_factorial, Rat};
use crate::matrix::{MatQ, MinorSpec};

/// Default cap on the dimension of exhaustive minor scans; the number of
/// minors grows as `C(2n, n) - 1`.
pub const DEFAULT_TNN_CAP: usize = 6;

/// An instance of the cyclic polynomials `p_k`: an offset `r >= 0`, a size
/// parameter `m` (vectors have `m + 1` entries), and the entry vector `x`.
/// All `m + 1` entries are free variables. When the instance is extracted
/// from a matrix of index `r` via [`PkInstance::from_matrix`], the entries
/// `x_i` with `i <= r` have no matrix counterpart and are stored as zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PkInstance {
    pub r: usize,
    pub m: usize,
    pub x: Vec<Rat>,
}

impl PkInstance {
    pub fn new(r: usize, m: usize, x: Vec<Rat>) -> Result<Self> {
        if x.len() != m + 1 {
            return Err(Error::MalformedEntries { dim: m + 1 });
        }
        Ok(PkInstance { r, m, x })
    }

    /// Reads the subdiagonal `x_i = A_{i, i-r}` (1-based) off a matrix of
    /// dimension `m + 1`; positions with `i <= r` fall outside the matrix
    /// and are zero.
    pub fn from_matrix(a: &MatQ, r: usize) -> Self {
        let dim = a.dim();
        let x = (1..=dim as i64)
            .map(|i| a.entry_or_zero(i, i - r as i64))
            .collect();
        PkInstance {
            r,
            m: dim - 1,
            x,
        }
    }

    /// 1-based entry access, zero outside `1..=m+1`.
    pub fn x_at(&self, i: i64) -> Rat {
        if i < 1 || i > self.x.len() as i64 {
            Rat::zero()
        } else {
            self.x[i as usize - 1].clone()
        }
    }

    pub fn x_is_zero(&self) -> bool {
        self.x.iter().all(Rat::is_zero)
    }
}

/// The cyclic sum
/// `p_k = sum x_{i_1} ... x_{i_k} / ((i_2-i_1+r)! (i_3-i_2+r)! ... (i_1-i_k+r)!)`
/// over all `(i_1, ..., i_k)` in `{1, ..., m+1}^k`, with `1/t! = 0` for
/// negative `t`.
pub fn pk_direct(inst: &PkInstance, k: u32) -> Result<Rat> {
    if k == 0 {
        return Err(Error::PositiveKRequired);
    }
    let size = inst.m as i64 + 1;
    let r = inst.r as i64;
    let mut total = Rat::zero();

    // Depth-first over the tuple, sharing the running product of the
    // prefix; the link factor ties consecutive indices, the closing factor
    // ties the last back to the first.
    fn go(
        inst: &PkInstance,
        r: i64,
        size: i64,
        k: u32,
        depth: u32,
        first: i64,
        prev: i64,
        running: Rat,
        total: &mut Rat,
    ) {
        for i in 1..=size {
            let mut term = &running * &inst.x_at(i);
            if depth > 1 {
                term = term * inv_factorial(i - prev + r);
            }
            if term.is_zero() {
                continue;
            }
            let first_here = if depth == 1 { i } else { first };
            if depth == k {
                *total = &*total + &(term * inv_factorial(first_here - i + r));
            } else {
                go(inst, r, size, k, depth + 1, first_here, i, term, total);
            }
        }
    }

    go(inst, r, size, k, 1, 0, 0, Rat::one(), &mut total);
    Ok(total)
}

/// The matrix with entries `1/(i - j + r)!` (1-based), zero above the
/// r-th superdiagonal by the negative-factorial convention.
pub fn mat_b(r: usize, m: usize) -> MatQ {
    MatQ::from_fn(m + 1, |i, j| {
        inv_factorial(i as i64 - j as i64 + r as i64)
    })
}

/// `diag(x) * B`: the one-sided row rescaling of [`mat_b`]. Cyclic
/// invariance of the trace makes `tr((diag(x) B)^k)` equal to the trace of
/// the k-th power of the symmetric rescaling by square roots of the `x_i`,
/// so every `p_k` identity survives while the arithmetic stays rational.
pub fn mat_a_from_x(inst: &PkInstance) -> MatQ {
    let b = mat_b(inst.r, inst.m);
    MatQ::from_fn(inst.m + 1, |i, j| &inst.x[i] * b.entry(i, j))
}

/// `p_k` computed as `tr((diag(x) B)^k)`; must agree with [`pk_direct`].
pub fn pk_via_trace(inst: &PkInstance, k: u32) -> Result<Rat> {
    if k == 0 {
        return Err(Error::PositiveKRequired);
    }
    Ok(mat_a_from_x(inst).mat_pow(k as u64).trace())
}

/// Searches `k = 1..=m+1` for a nonvanishing `p_k`. Returns
/// `(true, None)` when all vanish (in which case `x = 0` is checked: the
/// first `m + 1` vanishing power sums make `diag(x) B` nilpotent, so a
/// nonzero `x` must witness within that range) or `(false, Some(k))` with
/// the least witness.
pub fn theorem_pk_check(inst: &PkInstance) -> Result<(bool, Option<u32>)> {
    let a = mat_a_from_x(inst);
    let mut power = MatQ::identity(inst.m + 1);
    for k in 1..=(inst.m + 1) as u32 {
        power = power.mat_mul(&a)?;
        if !power.trace().is_zero() {
            return Ok((false, Some(k)));
        }
    }
    if !inst.x_is_zero() {
        return Err(Error::TheoremFalsified {
            context: format!(
                "all p_k vanish for k <= {} yet x != 0 (r={}, x={:?})",
                inst.m + 1,
                inst.r,
                inst.x
            ),
        });
    }
    Ok((true, None))
}

/// The binomial matrix with entries `C(i + r, j)` (1-based); equals
/// `diag((r+1)!, ..., (r+m+1)!) * B * diag(1/1!, ..., 1/(m+1)!)`.
pub fn mat_m(r: usize, m: usize) -> MatQ {
    MatQ::from_fn(m + 1, |i, j| {
        binom((i + 1 + r) as i64, (j + 1) as i64).expect("nonnegative upper argument")
    })
}

/// The n-by-n lower triangular Pascal matrix, entries `C(i-1, j-1)`.
pub fn pascal_l(n: usize) -> MatQ {
    assert!(n >= 1);
    MatQ::from_fn(n, |i, j| {
        binom(i as i64, j as i64).expect("nonnegative upper argument")
    })
}

/// `I + E_{t, t-1}` (1-based `t >= 2`).
fn elementary_bidiagonal(n: usize, t: usize) -> MatQ {
    MatQ::from_fn(n, |i, j| {
        if i == j || (i == t - 1 && j == t - 2) {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

/// Elementary lower-bidiagonal factors, each of the form `I + E_{i,i-1}`,
/// whose ordered product is exactly [`pascal_l`]`(n)`. The factorization
/// refines `L_n = G_n G_{n-1} ... G_2` with
/// `G_k = I + E_{n,n-1} + ... + E_{k,k-1}` and
/// `G_k = (I + E_{k,k-1})(I + E_{k+1,k}) ... (I + E_{n,n-1})`.
pub fn bidiagonal_factorization(n: usize) -> Vec<MatQ> {
    assert!(n >= 1);
    let mut factors = Vec::new();
    for k in (2..=n).rev() {
        for t in k..=n {
            factors.push(elementary_bidiagonal(n, t));
        }
    }
    factors
}

/// Exhaustive scan of every square minor. Returns the first violating
/// minor (sizes ascending, then row set, then column set, both in
/// lexicographic order) if the matrix is not totally nonnegative.
/// Dimensions above the cap are an explicit resource error.
pub fn is_totally_nonnegative(
    a: &MatQ,
    cap: Option<usize>,
) -> Result<(bool, Option<MinorSpec>)> {
    let cap = cap.unwrap_or(DEFAULT_TNN_CAP);
    let dim = a.dim();
    if dim > cap {
        return Err(Error::ResourceCap {
            what: "total nonnegativity scan",
            value: dim,
            cap,
        });
    }
    for size in 1..=dim {
        for rows in (1..=dim).combinations(size) {
            for cols in (1..=dim).combinations(size) {
                let spec = MinorSpec::new(rows.clone(), cols)?;
                if a.minor_det(&spec)?.is_negative() {
                    return Ok((false, Some(spec)));
                }
            }
        }
    }
    Ok((true, None))
}

/// Evaluates both sides of the Cauchy-Binet identity
/// `det((AB)_{I,J}) = sum_K det(A_{I,K}) det(B_{K,J})` and returns their
/// equality. This always holds; the operation exists as a test hook.
pub fn cauchy_binet_check(a: &MatQ, b: &MatQ, spec: &MinorSpec) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let product = a.mat_mul(b)?;
    let lhs = product.minor_det(spec)?;
    let mut rhs = Rat::zero();
    for k_set in (1..=a.dim()).combinations(spec.size()) {
        let left = MinorSpec::new(spec.rows().to_vec(), k_set.clone())?;
        let right = MinorSpec::new(k_set, spec.cols().to_vec())?;
        rhs = rhs + a.minor_det(&left)? * b.minor_det(&right)?;
    }
    Ok(lhs == rhs)
}

/// Step-by-step witness that the binomial minor `(L_n)_{P,Q}` with
/// `P = {q_i + r}`, `Q = {q_i}` has positive determinant: a sequence of
/// index sets `R_n, ..., R_1` with `R_n = P`, `R_1 = Q`, such that every
/// consecutive elementary minor `det((G_k)_{R_k, R_{k-1}})` equals 1. All
/// remaining terms of the Cauchy-Binet expansion are nonnegative because
/// each factor is totally nonnegative, so the chain forces `det >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub n: usize,
    pub chain: Vec<Vec<usize>>,
}

impl ChainCertificate {
    /// Re-derives every claim of the certificate from raw arithmetic:
    /// endpoints, cardinalities, and each step's elementary minor
    /// determinant.
    pub fn verify(&self, qs: &[usize], r: usize) -> Result<()> {
        validate_qs(qs)?;
        let m = qs.len();
        let n = self.n;
        let fail = |step: usize, detail: String| Error::ChainInvalid { step, detail };
        if self.chain.len() != n {
            return Err(fail(0, format!("chain has {} levels, expected {n}", self.chain.len())));
        }
        let p: Vec<usize> = qs.iter().map(|q| q + r).collect();
        if self.chain[0] != p {
            return Err(fail(n, "top level is not P".into()));
        }
        if self.chain[n - 1] != *qs {
            return Err(fail(1, "bottom level is not Q".into()));
        }
        for (idx, level) in self.chain.iter().enumerate() {
            if level.len() != m
                || !level.windows(2).all(|w| w[0] < w[1])
                || level[0] < 1
                || level[m - 1] > n
            {
                return Err(fail(n - idx, "level is not a strictly increasing subset".into()));
            }
        }
        // Step k multiplies by G_k = I + E_{n,n-1} + ... + E_{k,k-1}.
        for k in (2..=n).rev() {
            let factor = MatQ::from_fn(n, |i, j| {
                if i == j || (i == j + 1 && i + 1 >= k) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            });
            let rows = self.chain[n - k].clone();
            let cols = self.chain[n - k + 1].clone();
            let spec = MinorSpec::new(rows, cols)?;
            let det = factor.minor_det(&spec)?;
            if det != Rat::one() {
                return Err(fail(
                    k,
                    format!("elementary minor determinant is {det}, expected 1"),
                ));
            }
        }
        Ok(())
    }
}

fn validate_qs(qs: &[usize]) -> Result<()> {
    if qs.is_empty() || qs[0] < 1 || !qs.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::QsNotIncreasing);
    }
    Ok(())
}

/// Determinant of the binomial minor `(L_n)_{P,Q}` with `P = {q_i + r}`,
/// `Q = {q_i}` and ambient dimension `n = q_m + r + 1` (the smallest that
/// contains the minor), together with its verified positivity chain.
pub fn minor_positivity(qs: &[usize], r: usize) -> Result<(Rat, ChainCertificate)> {
    validate_qs(qs)?;
    let m = qs.len();
    let q1 = qs[0];
    let n = qs[m - 1] + r + 1;

    let l = pascal_l(n);
    let p: Vec<usize> = qs.iter().map(|q| q + r).collect();
    let spec = MinorSpec::new(p.clone(), qs.to_vec())?;
    let det = l.minor_det(&spec)?;
    if !det.is_positive() {
        return Err(Error::TheoremFalsified {
            context: format!("binomial minor determinant {det} is not positive for q={qs:?}, r={r}"),
        });
    }

    // Constant at P down to level q_1 + r, one simultaneous downward shift
    // per level for r levels, then constant at Q.
    let chain: Vec<Vec<usize>> = (1..=n)
        .rev()
        .map(|level| {
            if level >= q1 + r {
                p.clone()
            } else if level <= q1 {
                qs.to_vec()
            } else {
                qs.iter().map(|q| q + level - q1).collect()
            }
        })
        .collect();

    let cert = ChainCertificate { n, chain };
    cert.verify(qs, r)?;
    Ok((det, cert))
}
