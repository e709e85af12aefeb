//! End-to-end pipeline: verify the trace-constancy hypothesis for a pair
//! `(A, B)` with `B` a single Jordan block and, on success, produce a
//! self-checking certificate of a common eigenvector and a simultaneous
//! upper triangularization. On failure, surface the trace witness. The
//! commutator criterion for quasi-unipotence is exposed as a runnable
//! property alongside.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::index::is_upper_triangular;
use crate::matrix::MatQ;
use crate::tracepoly::{hypothesis_verifier, HypothesisReport};
use crate::unipotent::{
    is_quasi_unipotent, jordan_basis_single_block, single_jordan_block_eigenvalue,
};

/// Basis-change evidence that `<A, B>` is upper triangularizable: the
/// conjugates of both matrices by `P` are upper triangular, the first
/// column of `P` is a common eigenvector, and every prefix of `P`'s
/// columns spans a subspace invariant under both matrices. Everything is
/// re-derivable from the fields by plain matrix arithmetic via
/// [`TriangularizationCertificate::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularizationCertificate {
    pub p: MatQ,
    pub a_conj: MatQ,
    pub b_conj: MatQ,
    pub common_eigenvector: Vec<Rat>,
    pub eigenvalue_a: Rat,
    pub eigenvalue_b: Rat,
}

impl TriangularizationCertificate {
    /// Re-validates every invariant against the original pair, trusting no
    /// intermediate state: `P` invertible, exact conjugation equalities,
    /// upper triangularity, eigenvector equations, and flag invariance by
    /// residual rank computations.
    pub fn validate(&self, a: &MatQ, b: &MatQ) -> Result<()> {
        let fail = |detail: &str| Error::CertificateInvalid {
            detail: detail.into(),
        };
        let d = self.p.dim();
        if a.dim() != d || b.dim() != d {
            return Err(fail("dimension mismatch between pair and certificate"));
        }
        let p_inv = self.p.inverse().map_err(|_| fail("P is singular"))?;
        if p_inv.mat_mul(a)?.mat_mul(&self.p)? != self.a_conj {
            return Err(fail("P^-1 A P does not equal a_conj"));
        }
        if p_inv.mat_mul(b)?.mat_mul(&self.p)? != self.b_conj {
            return Err(fail("P^-1 B P does not equal b_conj"));
        }
        if !is_upper_triangular(&self.a_conj) {
            return Err(fail("a_conj is not upper triangular"));
        }
        if !is_upper_triangular(&self.b_conj) {
            return Err(fail("b_conj is not upper triangular"));
        }
        let v = &self.common_eigenvector;
        if v.len() != d || v.iter().all(Rat::is_zero) {
            return Err(fail("common eigenvector is zero or has wrong length"));
        }
        let scaled = |m: &MatQ, lambda: &Rat| -> bool {
            m.mul_vec(v)
                .iter()
                .zip(v)
                .all(|(lhs, vi)| *lhs == lambda * vi)
        };
        if !scaled(a, &self.eigenvalue_a) {
            return Err(fail("A v != eigenvalue_a v"));
        }
        if !scaled(b, &self.eigenvalue_b) {
            return Err(fail("B v != eigenvalue_b v"));
        }
        // Flag invariance: for each prefix of columns of P, appending the
        // images under A (resp. B) must not raise the rank.
        let cols: Vec<Vec<Rat>> = (0..d).map(|j| self.p.col(j)).collect();
        for i in 1..=d {
            let prefix: Vec<Vec<Rat>> = cols[..i].to_vec();
            if rank_of_columns(d, &prefix) != i {
                return Err(fail("columns of P are not independent"));
            }
            for (m, name) in [(a, "A"), (b, "B")] {
                let mut extended = prefix.clone();
                for c in &prefix {
                    extended.push(m.mul_vec(c));
                }
                if rank_of_columns(d, &extended) != i {
                    return Err(Error::CertificateInvalid {
                        detail: format!("prefix of length {i} is not invariant under {name}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Rank of a list of length-`dim` column vectors by Gaussian elimination.
fn rank_of_columns(dim: usize, cols: &[Vec<Rat>]) -> usize {
    let mut rows: Vec<Vec<Rat>> = cols.to_vec(); // eliminate on the transpose
    let mut rank = 0;
    for c in 0..dim {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][c].recip().unwrap();
        for j in 0..dim {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..dim {
                    rows[i][j] = &rows[i][j] - &(&f * &rows[rank][j]);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Which precondition of the main pipeline failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreconditionReason {
    DimensionMismatch,
    NonQuasiUnipotentA,
    NotSingleJordanBlockB,
}

/// Outcome of [`verify_main_theorem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    HypothesesHoldCertified {
        report: HypothesisReport,
        cert: TriangularizationCertificate,
    },
    HypothesesFailWitnessed {
        report: HypothesisReport,
    },
    PreconditionFailure {
        reason: PreconditionReason,
        detail: String,
    },
}

impl Verdict {
    /// Process exit code convention: 0 certified, 1 witnessed, 2
    /// precondition failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::HypothesesHoldCertified { .. } => 0,
            Verdict::HypothesesFailWitnessed { .. } => 1,
            Verdict::PreconditionFailure { .. } => 2,
        }
    }
}

fn build_certificate(
    a: &MatQ,
    b: &MatQ,
    eigenvalue_b: Rat,
) -> Result<TriangularizationCertificate> {
    let b_unipotent = if eigenvalue_b == Rat::one() {
        b.clone()
    } else {
        b.mat_mul(b)?
    };
    let p = jordan_basis_single_block(&b_unipotent)?;
    let p_inv = p.inverse()?;
    let a_conj = p_inv.mat_mul(a)?.mat_mul(&p)?;
    let b_conj = p_inv.mat_mul(b)?.mat_mul(&p)?;

    // This is the computational content of the verified hypothesis: the
    // Jordan basis of B must triangularize A. A failure here would
    // falsify the theorem and is never repaired.
    if !is_upper_triangular(&a_conj) {
        return Err(Error::TheoremFalsified {
            context: format!(
                "hypothesis verified but A is not triangular in the Jordan basis of B: A={a:?} B={b:?}"
            ),
        });
    }
    if !is_upper_triangular(&b_conj) {
        return Err(Error::TheoremFalsified {
            context: "B is not triangular in the Jordan basis of its own unipotent power".into(),
        });
    }

    // The eigenline of a single block is forced; normalize the leading
    // nonzero coordinate to 1 so the output is canonical.
    let raw = p.col(0);
    let lead = raw
        .iter()
        .find(|e| !e.is_zero())
        .expect("Jordan basis column is nonzero")
        .clone();
    let inv = lead.recip().unwrap();
    let v: Vec<Rat> = raw.iter().map(|e| e * &inv).collect();

    let cert = TriangularizationCertificate {
        eigenvalue_a: a_conj.entry(0, 0).clone(),
        eigenvalue_b,
        common_eigenvector: v,
        p,
        a_conj,
        b_conj,
    };
    cert.validate(a, b)?;
    Ok(cert)
}

/// Runs the full pipeline: checks the preconditions, decides the
/// hypothesis, and on a positive verdict builds and self-checks the
/// triangularization certificate. Precondition violations become a
/// `PreconditionFailure` verdict; only a falsified-theorem state is an
/// error.
pub fn verify_main_theorem(a: &MatQ, b: &MatQ) -> Result<Verdict> {
    if a.dim() != b.dim() {
        return Ok(Verdict::PreconditionFailure {
            reason: PreconditionReason::DimensionMismatch,
            detail: format!("A has dimension {}, B has dimension {}", a.dim(), b.dim()),
        });
    }
    let qu = is_quasi_unipotent(a);
    if !qu.is_quasi_unipotent {
        let witness = qu
            .witness_factor
            .map(|w| w.to_string())
            .unwrap_or_default();
        return Ok(Verdict::PreconditionFailure {
            reason: PreconditionReason::NonQuasiUnipotentA,
            detail: format!("characteristic polynomial has non-cyclotomic factor {witness}"),
        });
    }
    let Some(eigenvalue_b) = single_jordan_block_eigenvalue(b) else {
        return Ok(Verdict::PreconditionFailure {
            reason: PreconditionReason::NotSingleJordanBlockB,
            detail: "B is not a single Jordan block with eigenvalue 1 or -1".into(),
        });
    };

    let report = hypothesis_verifier(a, b)?;
    if report.verdict {
        let cert = build_certificate(a, b, eigenvalue_b)?;
        Ok(Verdict::HypothesesHoldCertified { report, cert })
    } else {
        Ok(Verdict::HypothesesFailWitnessed { report })
    }
}

/// Builds the triangularization certificate, first re-deciding the
/// hypothesis; an unverified hypothesis is a domain error.
pub fn triangularize(a: &MatQ, b: &MatQ) -> Result<TriangularizationCertificate> {
    let report = hypothesis_verifier(a, b)?;
    if !report.verdict {
        return Err(Error::HypothesisNotVerified);
    }
    let eigenvalue_b =
        single_jordan_block_eigenvalue(b).ok_or(Error::NotSingleJordanBlock { role: "B" })?;
    build_certificate(a, b, eigenvalue_b)
}

/// The common eigenvector from the certificate; for a single-block `B`
/// the eigenline is forced, so the normalized output is canonical.
pub fn common_eigenvector(a: &MatQ, b: &MatQ) -> Result<Vec<Rat>> {
    Ok(triangularize(a, b)?.common_eigenvector)
}

/// A pair `(k, n)` at which `tr((A B^n)^k)` departs from its `n = 0`
/// value, together with both traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleWitness {
    pub k: u32,
    pub n: u64,
    pub trace_base: Rat,
    pub trace_at_n: Rat,
}

/// Least `(k, n)` in lexicographic order with
/// `tr((A B^n)^k) != tr(A^k)`, over `k <= kmax`, `1 <= n <= nmax`.
/// A polynomial is constant exactly when it equals its value at 0
/// everywhere, so comparing against the `n = 0` trace is a complete
/// refutation strategy at sufficient bounds.
pub fn counterexample_search(
    a: &MatQ,
    b: &MatQ,
    kmax: u32,
    nmax: u64,
) -> Result<Option<CounterexampleWitness>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if kmax == 0 {
        return Err(Error::PositiveKRequired);
    }
    if single_jordan_block_eigenvalue(b).is_none() {
        return Err(Error::NotSingleJordanBlock { role: "B" });
    }
    let mut b_pows = Vec::with_capacity(nmax as usize + 1);
    b_pows.push(MatQ::identity(b.dim()));
    for _ in 1..=nmax {
        b_pows.push(b_pows.last().unwrap().mat_mul(b)?);
    }
    for k in 1..=kmax {
        let base = a.mat_pow(k as u64).trace();
        for (n, b_pow) in b_pows.iter().enumerate().skip(1) {
            let t = a.mat_mul(b_pow)?.mat_pow(k as u64).trace();
            if t != base {
                return Ok(Some(CounterexampleWitness {
                    k,
                    n: n as u64,
                    trace_base: base,
                    trace_at_n: t,
                }));
            }
        }
    }
    Ok(None)
}

/// The commutator criterion as a runnable property: verifies that
/// `g = [x_1, y_1] ... [x_s, y_s]` and that every `x_i` and `y_i` commutes
/// with `g` (violations are domain errors identifying the culprit, never a
/// `false`), then reports whether `g` is quasi-unipotent. Under the
/// preconditions this is always true.
pub fn commutator_qu_check(g: &MatQ, xs: &[MatQ], ys: &[MatQ]) -> Result<bool> {
    if xs.len() != ys.len() {
        return Err(Error::GeneratorCountMismatch {
            xs: xs.len(),
            ys: ys.len(),
        });
    }
    let d = g.dim();
    for m in xs.iter().chain(ys) {
        if m.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: m.dim(),
            });
        }
    }
    let mut product = MatQ::identity(d);
    for (x, y) in xs.iter().zip(ys) {
        let commutator = x
            .mat_mul(y)?
            .mat_mul(&x.inverse()?)?
            .mat_mul(&y.inverse()?)?;
        product = product.mat_mul(&commutator)?;
    }
    if product != *g {
        return Err(Error::CommutatorProductMismatch);
    }
    for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
        if x.mat_mul(g)? != g.mat_mul(x)? {
            return Err(Error::NotCommuting {
                which: format!("x_{} and g", i + 1),
            });
        }
        if y.mat_mul(g)? != g.mat_mul(y)? {
            return Err(Error::NotCommuting {
                which: format!("y_{} and g", i + 1),
            });
        }
    }
    Ok(is_quasi_unipotent(g).is_quasi_unipotent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    #[test]
    fn worked_pair_certifies_with_canonical_eigenvector() {
        let a = MatQ::from_i64_rows(&[&[1, 2], &[0, 1]]).unwrap();
        let b = MatQ::unipotent_block(2);
        let verdict = verify_main_theorem(&a, &b).unwrap();
        match &verdict {
            Verdict::HypothesesHoldCertified { report, cert } => {
                assert!(report.verdict);
                assert_eq!(cert.common_eigenvector, vec![r(1), r(0)]);
                assert_eq!(cert.eigenvalue_a, r(1));
                assert_eq!(cert.eigenvalue_b, r(1));
                cert.validate(&a, &b).unwrap();
            }
            other => panic!("expected certified verdict, got {other:?}"),
        }
        assert_eq!(verdict.exit_code(), 0);
    }

    #[test]
    fn worked_pair_witnesses_failure() {
        let a = MatQ::from_i64_rows(&[&[1, 0], &[1, 1]]).unwrap();
        let b = MatQ::unipotent_block(2);
        let verdict = verify_main_theorem(&a, &b).unwrap();
        match &verdict {
            Verdict::HypothesesFailWitnessed { report } => {
                let w = report.witness.as_ref().unwrap();
                assert_eq!((w.k, w.n1, w.n2), (1, 0, 1));
                assert_eq!(w.t1, r(2));
                assert_eq!(w.t2, r(3));
            }
            other => panic!("expected witnessed verdict, got {other:?}"),
        }
        assert_eq!(verdict.exit_code(), 1);
    }

    #[test]
    fn precondition_failures_are_distinct() {
        let b = MatQ::unipotent_block(2);

        let not_qu = MatQ::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap();
        let verdict = verify_main_theorem(&not_qu, &b).unwrap();
        assert!(matches!(
            verdict,
            Verdict::PreconditionFailure {
                reason: PreconditionReason::NonQuasiUnipotentA,
                ..
            }
        ));
        assert_eq!(verdict.exit_code(), 2);

        let two_blocks = verify_main_theorem(&MatQ::identity(2), &MatQ::identity(2)).unwrap();
        assert!(matches!(
            two_blocks,
            Verdict::PreconditionFailure {
                reason: PreconditionReason::NotSingleJordanBlockB,
                ..
            }
        ));

        let mismatch =
            verify_main_theorem(&MatQ::identity(2), &MatQ::unipotent_block(3)).unwrap();
        assert!(matches!(
            mismatch,
            Verdict::PreconditionFailure {
                reason: PreconditionReason::DimensionMismatch,
                ..
            }
        ));
    }

    #[test]
    fn triangularize_requires_verified_hypothesis() {
        let a = MatQ::from_i64_rows(&[&[1, 0], &[1, 1]]).unwrap();
        let b = MatQ::unipotent_block(2);
        assert!(matches!(
            triangularize(&a, &b),
            Err(Error::HypothesisNotVerified)
        ));
    }

    #[test]
    fn identical_blocks_share_the_first_basis_vector() {
        let b = MatQ::unipotent_block(3);
        let cert = triangularize(&b, &b).unwrap();
        assert_eq!(cert.common_eigenvector, vec![r(1), r(0), r(0)]);
        cert.validate(&b, &b).unwrap();
    }

    #[test]
    fn conjugated_pair_recovers_covariant_eigenline() {
        // Conjugate a compatible pair by Q and check the eigenline moves
        // with it.
        let a = MatQ::from_i64_rows(&[&[1, 2, -1], &[0, 1, 3], &[0, 0, 1]]).unwrap();
        let b = MatQ::unipotent_block(3);
        let q = MatQ::from_i64_rows(&[&[1, 1, 0], &[0, 1, 2], &[0, 0, 1]]).unwrap();
        let q_inv = q.inverse().unwrap();
        let a_c = q.mat_mul(&a).unwrap().mat_mul(&q_inv).unwrap();
        let b_c = q.mat_mul(&b).unwrap().mat_mul(&q_inv).unwrap();

        let v = common_eigenvector(&a, &b).unwrap();
        let v_c = common_eigenvector(&a_c, &b_c).unwrap();
        let moved = q.mul_vec(&v);
        // same line: moved and v_c proportional
        let ratio = moved
            .iter()
            .zip(&v_c)
            .find(|(m, w)| !m.is_zero() || !w.is_zero())
            .map(|(m, w)| m / w)
            .unwrap();
        for (m, w) in moved.iter().zip(&v_c) {
            assert_eq!(*m, &ratio * w);
        }
    }

    #[test]
    fn negative_eigenvalue_block_certifies_with_eigenvalue_minus_one() {
        let b = MatQ::unipotent_block(3).scale(&r(-1));
        let a = MatQ::from_i64_rows(&[&[-1, 1, 0], &[0, 1, 2], &[0, 0, 1]]).unwrap();
        let cert = triangularize(&a, &b).unwrap();
        assert_eq!(cert.eigenvalue_b, r(-1));
        assert_eq!(cert.eigenvalue_a, r(-1));
        cert.validate(&a, &b).unwrap();
    }

    #[test]
    fn counterexample_search_examples() {
        let b = MatQ::unipotent_block(2);

        let a = MatQ::from_i64_rows(&[&[1, 0], &[1, 1]]).unwrap();
        let w = counterexample_search(&a, &b, 3, 3).unwrap().unwrap();
        assert_eq!((w.k, w.n), (1, 1));
        assert_eq!(w.trace_base, r(2));
        assert_eq!(w.trace_at_n, r(3));

        let upper = MatQ::from_i64_rows(&[&[1, 5], &[0, 1]]).unwrap();
        assert!(counterexample_search(&upper, &b, 4, 6).unwrap().is_none());
    }

    #[test]
    fn commutator_check_examples() {
        let id = MatQ::identity(2);
        assert!(commutator_qu_check(&id, &[id.clone()], &[id.clone()]).unwrap());

        // Heisenberg-style: [I + E12, I + E23] = I + E13, central among
        // the generators.
        let x = MatQ::from_i64_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let y = MatQ::from_i64_rows(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        let g = MatQ::from_i64_rows(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(commutator_qu_check(&g, &[x.clone()], &[y.clone()]).unwrap());

        // -I is a commutator of the rotation by i and a reflection, and
        // is central; it is quasi-unipotent of order 2.
        let rot = MatQ::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap();
        let refl = MatQ::from_i64_rows(&[&[1, 0], &[0, -1]]).unwrap();
        let neg = MatQ::identity(2).scale(&r(-1));
        assert!(commutator_qu_check(&neg, &[rot], &[refl]).unwrap());

        // wrong product is a domain error
        assert!(matches!(
            commutator_qu_check(&x, &[x.clone()], &[y.clone()]),
            Err(Error::CommutatorProductMismatch)
        ));

        // commutation violations identify the culprit
        let z = MatQ::from_i64_rows(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]).unwrap();
        let err = commutator_qu_check(&g, &[z], &[y]).unwrap_err();
        assert!(matches!(err, Error::CommutatorProductMismatch | Error::NotCommuting { .. }));

        assert!(matches!(
            commutator_qu_check(&g, &[x], &[]),
            Err(Error::GeneratorCountMismatch { .. })
        ));
    }

    #[test]
    fn verdict_serialization_is_deterministic() {
        let a = MatQ::from_i64_rows(&[&[1, 2], &[0, 1]]).unwrap();
        let b = MatQ::unipotent_block(2);
        let v1 = serde_json::to_string(&verify_main_theorem(&a, &b).unwrap()).unwrap();
        let v2 = serde_json::to_string(&verify_main_theorem(&a, &b).unwrap()).unwrap();
        assert_eq!(v1, v2);
        assert!(v1.contains("\"status\":\"hypotheses-hold-certified\""));
    }
}
