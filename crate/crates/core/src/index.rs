//! The index of a square matrix: the unique `k` such that every entry
//! strictly below the `k`-th subdiagonal vanishes while some entry on it
//! does not. Upper triangular matrices are exactly those of index <= 0,
//! and the index is submultiplicative, which yields a closed-form trace
//! for index-balanced products.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::matrix::MatQ;

/// Index of a matrix. The zero matrix satisfies the band condition for
/// every `k` but never the attainment condition, so it gets the
/// distinguished value `Bottom`, which compares below every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndexValue {
    Bottom,
    Value(i64),
}

impl IndexValue {
    pub fn as_int(self) -> Option<i64> {
        match self {
            IndexValue::Bottom => None,
            IndexValue::Value(v) => Some(v),
        }
    }
}

/// Sum with `Bottom` absorbing, matching its role as minus infinity.
impl std::ops::Add for IndexValue {
    type Output = IndexValue;
    fn add(self, other: IndexValue) -> IndexValue {
        match (self, other) {
            (IndexValue::Value(a), IndexValue::Value(b)) => IndexValue::Value(a + b),
            _ => IndexValue::Bottom,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Bottom => f.write_str("bottom"),
            IndexValue::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for IndexValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IndexValue::Bottom => serializer.serialize_str("bottom"),
            IndexValue::Value(v) => serializer.serialize_i64(*v),
        }
    }
}

struct IndexValueVisitor;

impl Visitor<'_> for IndexValueVisitor {
    type Value = IndexValue;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or the string \"bottom\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<IndexValue, E> {
        if v == "bottom" {
            Ok(IndexValue::Bottom)
        } else {
            Err(E::custom(format!("unknown index value {v:?}")))
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<IndexValue, E> {
        Ok(IndexValue::Value(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<IndexValue, E> {
        Ok(IndexValue::Value(v as i64))
    }
}

impl<'de> Deserialize<'de> for IndexValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(IndexValueVisitor)
    }
}

/// The index is the largest `i - j` (1-based) over nonzero entries.
pub fn index_of(a: &MatQ) -> IndexValue {
    let d = a.dim();
    let mut best: Option<i64> = None;
    for i in 0..d {
        for j in 0..d {
            if !a.entry(i, j).is_zero() {
                let diff = i as i64 - j as i64;
                best = Some(best.map_or(diff, |b| b.max(diff)));
            }
        }
    }
    match best {
        None => IndexValue::Bottom,
        Some(v) => IndexValue::Value(v),
    }
}

/// True exactly when `index_of(a) <= 0`, i.e. nothing below the diagonal.
pub fn is_upper_triangular(a: &MatQ) -> bool {
    index_of(a) <= IndexValue::Value(0)
}

/// Truth of `ind(AB) <= ind(A) + ind(B)`. This always holds; the operation
/// exists as a test hook. A `Bottom` operand (or product) makes the
/// inequality vacuous.
pub fn check_submultiplicative(a: &MatQ, b: &MatQ) -> Result<bool> {
    let product = a.mat_mul(b)?;
    let bound = index_of(a) + index_of(b);
    Ok(match (index_of(&product), bound) {
        (IndexValue::Bottom, _) => true,
        (_, IndexValue::Bottom) => true,
        (IndexValue::Value(p), IndexValue::Value(s)) => p <= s,
    })
}

/// Trace of an index-balanced product as a single sum: with `n_i = ind(A_i)`
/// and `sum n_i = 0`,
/// `tr(A_1 ... A_s) = sum_k (A_1)_{k,k-n_1} (A_2)_{k-n_1,k-n_1-n_2} ...`,
/// where any out-of-range subscript selects a zero entry.
pub fn product_trace_formula(mats: &[MatQ]) -> Result<Rat> {
    let first = mats.first().ok_or(Error::EmptyMatrixList)?;
    let d = first.dim();
    for m in mats {
        if m.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: m.dim(),
            });
        }
    }
    let indices: Vec<IndexValue> = mats.iter().map(index_of).collect();
    let sum = indices
        .iter()
        .copied()
        .fold(IndexValue::Value(0), |acc, v| acc + v);
    if sum != IndexValue::Value(0) {
        return Err(Error::IndexSumNonzero {
            sum: sum.to_string(),
        });
    }

    let mut total = Rat::zero();
    for k in 1..=d as i64 {
        let mut term = Rat::one();
        let mut row = k;
        for (m, ind) in mats.iter().zip(&indices) {
            let col = row - ind.as_int().unwrap();
            term = term * m.entry_or_zero(row, col);
            if term.is_zero() {
                break;
            }
            row = col;
        }
        total = total + term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e21(dim: usize) -> MatQ {
        MatQ::from_fn(dim, |i, j| {
            if i == 1 && j == 0 {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_of(&MatQ::identity(3)), IndexValue::Value(0));
        assert_eq!(index_of(&MatQ::nilpotent_block(4)), IndexValue::Value(-1));
        assert_eq!(index_of(&e21(2)), IndexValue::Value(1));
        assert_eq!(index_of(&MatQ::zero(3)), IndexValue::Bottom);
    }

    #[test]
    fn bottom_sorts_below_everything() {
        assert!(IndexValue::Bottom < IndexValue::Value(i64::MIN));
        assert_eq!(
            IndexValue::Bottom + IndexValue::Value(5),
            IndexValue::Bottom
        );
    }

    #[test]
    fn upper_triangular_examples() {
        assert!(is_upper_triangular(&MatQ::identity(3)));
        assert!(!is_upper_triangular(&e21(2)));
        assert!(is_upper_triangular(&MatQ::zero(3)));
        assert!(is_upper_triangular(&MatQ::nilpotent_block(3)));
    }

    #[test]
    fn submultiplicative_examples() {
        let id = MatQ::identity(2);
        assert!(check_submultiplicative(&id, &id).unwrap());

        // ind(E21 N) = 0 <= 1 + (-1)
        let a = e21(2);
        let b = MatQ::nilpotent_block(2);
        let product = a.mat_mul(&b).unwrap();
        assert_eq!(
            product,
            MatQ::from_i64_rows(&[&[0, 0], &[0, 1]]).unwrap()
        );
        assert!(check_submultiplicative(&a, &b).unwrap());

        assert!(check_submultiplicative(&MatQ::zero(2), &a).unwrap());
    }

    #[test]
    fn product_trace_formula_examples() {
        let id = MatQ::identity(3);
        assert_eq!(product_trace_formula(&[id]).unwrap(), Rat::from(3));

        let n = MatQ::nilpotent_block(2);
        let e = e21(2);
        let direct = n.mat_mul(&e).unwrap().trace();
        assert_eq!(direct, Rat::from(1));
        assert_eq!(
            product_trace_formula(&[n.clone(), e.clone()]).unwrap(),
            direct
        );

        // index sum 1 + 1 != 0 is a domain error
        assert!(matches!(
            product_trace_formula(&[e.clone(), e.clone()]),
            Err(Error::IndexSumNonzero { .. })
        ));

        // a zero matrix has no defined index, so the sum precondition fails
        assert!(matches!(
            product_trace_formula(&[n, MatQ::zero(2)]),
            Err(Error::IndexSumNonzero { .. })
        ));

        assert!(matches!(
            product_trace_formula(&[]),
            Err(Error::EmptyMatrixList)
        ));
    }

    #[test]
    fn negative_index_forces_zero_trace() {
        let n = MatQ::nilpotent_block(4);
        assert!(index_of(&n) < IndexValue::Value(0));
        assert!(n.trace().is_zero());
    }
}
