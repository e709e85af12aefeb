//! Quasi-unipotence and Jordan-structure predicates over the rationals.
//!
//! A matrix is unipotent when `(A - I)^dim = 0` and quasi-unipotent when
//! some positive power is unipotent, equivalently when every eigenvalue is
//! a root of unity. Over the rationals the latter is decidable without
//! factoring: a primitive n-th root of unity occurring as an eigenvalue of
//! a dimension-d matrix forces `phi(n) <= d`, so it suffices to test
//! `x^L = 1` modulo the squarefree part of the characteristic polynomial,
//! where `L = lcm { n : phi(n) <= d }`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{totient_order_lcm, Rat, UniPoly};
use crate::index::is_upper_triangular;
use crate::matrix::MatQ;

/// Outcome of the quasi-unipotence decision. Exactly one of
/// `unipotent_order` (positive verdict) and `witness_factor` (negative
/// verdict: a nontrivial factor of the characteristic polynomial none of
/// whose roots is a root of unity) is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuReport {
    pub is_quasi_unipotent: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unipotent_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_factor: Option<UniPoly>,
}

/// True iff `(A - I)^dim = 0`, equivalently the characteristic polynomial
/// is `(x - 1)^dim`.
pub fn is_unipotent(a: &MatQ) -> bool {
    let d = a.dim();
    let m = a.sub(&MatQ::identity(d)).unwrap();
    m.mat_pow(d as u64).is_zero()
}

/// Divisors of `n` in increasing order.
fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Decides whether every eigenvalue of `a` is a root of unity. A singular
/// matrix reports false with witness `x`. On a positive verdict the least
/// `k` with `a^k` unipotent is found among the divisors of the totient
/// order bound; on a negative verdict the witness factor is split off the
/// squarefree part by a gcd against `x^L - 1`.
pub fn is_quasi_unipotent(a: &MatQ) -> QuReport {
    if a.det().is_zero() {
        return QuReport {
            is_quasi_unipotent: false,
            unipotent_order: None,
            witness_factor: Some(UniPoly::x()),
        };
    }
    let q = a.char_poly().squarefree_part();
    let order_bound = totient_order_lcm(a.dim() as u64);
    let xp = UniPoly::x_pow_mod(order_bound, &q);
    if xp == UniPoly::one() {
        let order = divisors(order_bound)
            .into_iter()
            .find(|&k| is_unipotent(&a.mat_pow(k)))
            .expect("x^L = 1 mod q guarantees a^L is unipotent");
        QuReport {
            is_quasi_unipotent: true,
            unipotent_order: Some(order),
            witness_factor: None,
        }
    } else {
        // gcd(q, x^L - 1) collects the cyclotomic part of q; the quotient
        // is a nontrivial factor with no root-of-unity roots.
        let shifted = &xp - &UniPoly::one();
        let cyclotomic_part = q.gcd(&shifted);
        let witness = q.divrem(&cyclotomic_part).0.monic();
        QuReport {
            is_quasi_unipotent: false,
            unipotent_order: None,
            witness_factor: Some(witness),
        }
    }
}

/// If the Jordan form of `b` is a single block with a rational
/// root-of-unity eigenvalue, returns that eigenvalue (necessarily 1 or -1
/// over the rationals); otherwise `None`. The test is: the characteristic
/// polynomial is `(x - eigenvalue)^dim` and `rank(b - eigenvalue I) = dim - 1`.
pub fn single_jordan_block_eigenvalue(b: &MatQ) -> Option<Rat> {
    let d = b.dim();
    let p = b.char_poly();
    // If p = (x - t)^d then t = -coeff(d-1)/d.
    let eigenvalue = -(p.coeff(d - 1) / Rat::from(d as i64));
    if eigenvalue != Rat::one() && eigenvalue != -Rat::one() {
        return None;
    }
    let linear = UniPoly::new(vec![-&eigenvalue, Rat::one()]);
    if linear.pow(d as u32) != p {
        return None;
    }
    let shifted = b
        .sub(&MatQ::identity(d).scale(&eigenvalue))
        .expect("same dimension");
    if shifted.rank() != d - 1 {
        return None;
    }
    Some(eigenvalue)
}

pub fn is_single_jordan_block(b: &MatQ) -> bool {
    single_jordan_block_eigenvalue(b).is_some()
}

/// For a unipotent single block `b`, returns an invertible `P` with
/// `P^-1 b P = I + N` exactly. Columns are
/// `(b-I)^m w, ..., (b-I) w, w` for the first standard basis vector `w`
/// not killed by `(b-I)^m`, so the first column spans the eigenline.
pub fn jordan_basis_single_block(b: &MatQ) -> Result<MatQ> {
    if single_jordan_block_eigenvalue(b) != Some(Rat::one()) {
        return Err(Error::NotUnipotentSingleBlock);
    }
    let d = b.dim();
    let m = d - 1;
    let nil = b.sub(&MatQ::identity(d)).unwrap();
    let top = nil.mat_pow(m as u64);
    let w = (0..d)
        .find(|&j| top.col(j).iter().any(|e| !e.is_zero()))
        .expect("(b-I)^m is nonzero for a single block");

    let mut cols = Vec::with_capacity(d);
    let mut v: Vec<Rat> = (0..d)
        .map(|i| {
            if i == w {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    cols.push(v.clone());
    for _ in 0..m {
        v = nil.mul_vec(&v);
        cols.push(v.clone());
    }
    cols.reverse();
    let p = MatQ::from_cols(cols)?;

    // The construction guarantees the conjugate; re-derive it anyway so a
    // broken invariant can never leave this function silently.
    let conj = p.inverse()?.mat_mul(b)?.mat_mul(&p)?;
    if conj != MatQ::unipotent_block(d) {
        return Err(Error::TheoremFalsified {
            context: "jordan basis conjugation did not restore I + N".into(),
        });
    }
    Ok(p)
}

/// With `j = I + N` the canonical single block and `m` commuting with `j`,
/// returns whether `m` is upper triangular. This always holds for
/// commuting `m`; the operation exists as a test hook. Non-commuting or
/// non-canonical input is a domain error, not a `false`.
pub fn centralizer_is_upper_triangular_check(m: &MatQ, j: &MatQ) -> Result<bool> {
    if *j != MatQ::unipotent_block(j.dim()) {
        return Err(Error::NotCanonicalJordanBlock);
    }
    if m.dim() != j.dim() {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: j.dim(),
        });
    }
    if m.mat_mul(j)? != j.mat_mul(m)? {
        return Err(Error::NotCommuting {
            which: "M and J".into(),
        });
    }
    Ok(is_upper_triangular(m))
}
