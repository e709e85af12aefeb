//! Shared random generators and independent oracles for the integration
//! suites. Everything is seeded, so failures reproduce.
#![allow(dead_code)]

use liekolchin::exact::Rat;
use liekolchin::index::{index_of, IndexValue};
use liekolchin::matrix::MatQ;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in `-max..=max` and denominator in
/// `1..=max_den`.
pub fn rand_rat(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rat {
    let num = rng.gen_range(-max..=max);
    let den = rng.gen_range(1..=max_den);
    Rat::from_frac(num, den).unwrap()
}

/// Dense random matrix with small rational entries and some sprinkled
/// zeros.
pub fn rand_mat(rng: &mut ChaCha8Rng, dim: usize) -> MatQ {
    MatQ::from_fn(dim, |_, _| {
        if rng.gen_bool(0.25) {
            Rat::zero()
        } else {
            rand_rat(rng, 3, 2)
        }
    })
}

/// Random matrix with index exactly `k` (1-based band `i - j = k`).
pub fn rand_mat_with_index(rng: &mut ChaCha8Rng, dim: usize, k: i64) -> MatQ {
    assert!(k > -(dim as i64) && k < dim as i64);
    loop {
        let m = MatQ::from_fn(dim, |i, j| {
            let diff = i as i64 - j as i64;
            if diff > k || rng.gen_bool(0.3) {
                Rat::zero()
            } else {
                rand_rat(rng, 3, 2)
            }
        });
        if index_of(&m) == IndexValue::Value(k) {
            return m;
        }
    }
}

/// Random banded matrix: zero strictly below the k-th subdiagonal, so its
/// index is at most `k` (it may be smaller, or bottom).
pub fn rand_banded_at_most(rng: &mut ChaCha8Rng, dim: usize, k: i64) -> MatQ {
    MatQ::from_fn(dim, |i, j| {
        let diff = i as i64 - j as i64;
        if diff > k || rng.gen_bool(0.4) {
            Rat::zero()
        } else {
            rand_rat(rng, 3, 2)
        }
    })
}

/// List of `len` matrices of the given dimension whose indices sum to 0.
pub fn rand_index_balanced_list(rng: &mut ChaCha8Rng, dim: usize, len: usize) -> Vec<MatQ> {
    let max = dim as i64 - 1;
    loop {
        let mut indices: Vec<i64> = (0..len - 1)
            .map(|_| rng.gen_range(-max.min(2)..=max.min(2)))
            .collect();
        let rest: i64 = -indices.iter().sum::<i64>();
        if rest.abs() > max {
            continue;
        }
        indices.push(rest);
        return indices
            .into_iter()
            .map(|k| rand_mat_with_index(rng, dim, k))
            .collect();
    }
}

/// Random upper triangular matrix with unit diagonal.
pub fn rand_upper_unitriangular(rng: &mut ChaCha8Rng, dim: usize) -> MatQ {
    MatQ::from_fn(dim, |i, j| {
        if i == j {
            Rat::one()
        } else if i < j {
            rand_rat(rng, 2, 2)
        } else {
            Rat::zero()
        }
    })
}

/// Random upper triangular quasi-unipotent matrix: diagonal entries drawn
/// from {1, -1}, free entries above.
pub fn rand_upper_qu(rng: &mut ChaCha8Rng, dim: usize) -> MatQ {
    MatQ::from_fn(dim, |i, j| {
        if i == j {
            if rng.gen_bool(0.5) {
                Rat::one()
            } else {
                Rat::from(-1)
            }
        } else if i < j {
            rand_rat(rng, 2, 2)
        } else {
            Rat::zero()
        }
    })
}

/// Random invertible matrix with small entries, as a product of unit
/// triangular factors (determinant 1 by construction).
pub fn rand_invertible(rng: &mut ChaCha8Rng, dim: usize) -> MatQ {
    let lower = MatQ::from_fn(dim, |i, j| {
        if i == j {
            Rat::one()
        } else if i > j && rng.gen_bool(0.6) {
            rand_rat(rng, 2, 1)
        } else {
            Rat::zero()
        }
    });
    let upper = rand_upper_unitriangular(rng, dim);
    lower.mat_mul(&upper).unwrap()
}

/// Random quasi-unipotent matrix with strictly positive index: a conjugate
/// of an upper triangular quasi-unipotent matrix that actually picked up
/// something below the diagonal.
pub fn rand_qu_with_positive_index(rng: &mut ChaCha8Rng, dim: usize) -> MatQ {
    loop {
        let t = rand_upper_qu(rng, dim);
        let q = rand_invertible(rng, dim);
        let a = q
            .mat_mul(&t)
            .unwrap()
            .mat_mul(&q.inverse().unwrap())
            .unwrap();
        if matches!(index_of(&a), IndexValue::Value(k) if k >= 1) {
            return a;
        }
    }
}

/// Independent determinant oracle: recursive cofactor expansion.
pub fn cofactor_det(a: &MatQ) -> Rat {
    let n = a.dim();
    if n == 1 {
        return a.entry(0, 0).clone();
    }
    let mut acc = Rat::zero();
    for j in 0..n {
        let c = a.entry(0, j);
        if c.is_zero() {
            continue;
        }
        let sub = MatQ::from_fn(n - 1, |i2, j2| {
            a.entry(i2 + 1, if j2 < j { j2 } else { j2 + 1 }).clone()
        });
        let term = c * &cofactor_det(&sub);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
