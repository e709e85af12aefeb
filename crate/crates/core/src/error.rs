use thiserror::Error;

/// Errors surfaced by the exact-arithmetic pipeline.
///
/// Precondition violations are always reported through a dedicated variant;
/// they are never folded into a negative verdict.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("entry grid does not match declared dimension {dim}")]
    MalformedEntries { dim: usize },

    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("cannot parse rational from {input:?}")]
    RationalParse { input: String },

    #[error("binomial upper argument must be non-negative, got {p}")]
    NegativeBinomial { p: i64 },

    #[error("interpolation abscissae must be pairwise distinct")]
    DuplicateAbscissa,

    #[error("minor index sets must be nonempty, strictly increasing and of equal size")]
    MalformedMinor,

    #[error("minor indices out of range for dimension {dim}")]
    MinorOutOfRange { dim: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix list must be nonempty")]
    EmptyMatrixList,

    #[error("product trace formula requires index sum 0, got {sum}")]
    IndexSumNonzero { sum: String },

    #[error("k must be a positive integer")]
    PositiveKRequired,

    #[error("matrix {role} is not quasi-unipotent")]
    NotQuasiUnipotent { role: &'static str },

    #[error("matrix {role} is not a single Jordan block over the rationals")]
    NotSingleJordanBlock { role: &'static str },

    #[error("matrix is not a unipotent single Jordan block")]
    NotUnipotentSingleBlock,

    #[error("matrix J is not the canonical single block I + N")]
    NotCanonicalJordanBlock,

    #[error("matrices do not commute: {which}")]
    NotCommuting { which: String },

    #[error("product of commutators does not equal g")]
    CommutatorProductMismatch,

    #[error("generator lists have mismatched lengths: {xs} vs {ys}")]
    GeneratorCountMismatch { xs: usize, ys: usize },

    #[error("hypothesis has not been verified for this pair")]
    HypothesisNotVerified,

    #[error("q must be a nonempty strictly increasing list of positive integers")]
    QsNotIncreasing,

    #[error("chain certificate invalid at step {step}: {detail}")]
    ChainInvalid { step: usize, detail: String },

    #[error("certificate invalid: {detail}")]
    CertificateInvalid { detail: String },

    #[error("dimension {value} exceeds the resource cap {cap} for {what}")]
    ResourceCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    /// A verified hypothesis led to a conclusion the mathematics excludes.
    /// This is never absorbed: it means either an implementation bug or a
    /// genuine counterexample, and both must surface with full context.
    #[error("theorem falsified: {context}")]
    TheoremFalsified { context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
