use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Variants are grouped by the surface they come from:
/// domain validation, numerical failure, and file parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("off-diagonal entry a[{index}] = {value} must be positive")]
    NonPositiveOffDiagonal { index: i64, value: f64 },

    #[error("site range {n_min}..{n_max} is invalid: {reason}")]
    BadSiteRange {
        n_min: i64,
        n_max: i64,
        reason: String,
    },

    #[error(
        "verblunsky coefficient alpha[{index}] has modulus {modulus}, outside the open unit disc"
    )]
    VerblunskyOutOfDisc { index: i64, modulus: f64 },

    #[error("boundary closure has modulus {modulus}, expected a unimodular value")]
    BoundaryNotUnimodular { modulus: f64 },

    #[error("theta block argument has modulus {modulus} > 1")]
    ThetaOutOfRange { modulus: f64 },

    #[error("matrix is not square: {rows} rows, {len} entries")]
    NotSquare { rows: usize, len: usize },

    #[error(
        "operator tagged {kind} violates its kind invariant: residual {residual:.3e} > {limit:.3e}"
    )]
    KindViolation {
        kind: &'static str,
        residual: f64,
        limit: f64,
    },

    #[error("site labels must be strictly increasing and match the dimension")]
    BadSiteLabels,

    #[error("dimension mismatch: operator is {dim}, vector has length {len}")]
    DimensionMismatch { dim: usize, len: usize },

    #[error("coupling constant must be {expected}, got {got}")]
    BadCoupling { expected: &'static str, got: String },

    #[error("vector must be nonzero")]
    ZeroVector,

    #[error("vector must have unit norm, got {norm}")]
    NotUnitNorm { norm: f64 },

    #[error("cut at site {cut} is outside the window {n_min}..{n_max}")]
    CutOutOfWindow { cut: i64, n_min: i64, n_max: i64 },

    #[error("cut index {index} must be odd: the replaced block lives in the odd-index factor")]
    CutNotOdd { index: i64 },

    #[error("decoupling is singular at alpha = -1: the replacement value x is undefined")]
    SingularDecoupling,

    #[error("operator kind {got} is not supported here (expected {expected})")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error(
        "eigensolver failed to converge: achieved residual {achieved:.3e} (budget {budget} sweeps)"
    )]
    NoConvergence { achieved: f64, budget: usize },

    #[error(
        "eigendecomposition {what} {achieved:.3e} exceeds the requested tolerance {requested:.3e}"
    )]
    ResidualAboveTolerance {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error(
        "evaluation point is within {distance:.3e} of the atom at ({location_re}, {location_im})"
    )]
    PoleProximity {
        distance: f64,
        location_re: f64,
        location_im: f64,
    },

    #[error("measure of kind {got} is not supported here (expected {expected})")]
    MeasureKindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("measure must be normalized to unit mass, got {mass}")]
    NotNormalized { mass: f64 },

    #[error("evaluation point is outside the admissible region: {reason}")]
    BadEvaluationPoint { reason: String },

    #[error("ambiguous atom matching: atom at ({location_re}, {location_im}) is within {tol:.3e} of {count} atoms of the other measure; reduce the merge tolerance upstream")]
    AmbiguousMatch {
        location_re: f64,
        location_im: f64,
        tol: f64,
        count: usize,
    },

    #[error("unitary operator has an eigenvalue within {distance:.3e} of 1: the selfadjoint preimage is unbounded")]
    UnboundedPreimage { distance: f64 },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("window file parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
