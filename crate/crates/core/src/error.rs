use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension n = {0} (need n >= 3)")]
    InvalidDimension(usize),

    #[error("grid too small: m = {0} (need m >= 16)")]
    GridTooSmall(usize),

    #[error("warping function non-positive at cell {index}: phi = {value}")]
    NonPositiveProfile { index: usize, value: f64 },

    #[error("profile does not close up regularly at the {pole} pole: slope {slope}")]
    PoleRegularity { pole: &'static str, slope: f64 },

    #[error("field has {got} values, grid has {expected}")]
    GridMismatch { expected: usize, got: usize },

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("flow extinct: t = {t} >= extinction time {extinction}")]
    FlowExtinct { t: f64, extinction: f64 },

    #[error("CFL violation: dt = {dt} needs {needed} substeps, limit is {limit}")]
    CflViolation { dt: f64, needed: usize, limit: usize },

    #[error("normalization violated: {0}")]
    Normalization(String),

    #[error("conjugate heat normalization drift {drift:e} at t = {t}")]
    NormalizationDrift { t: f64, drift: f64 },

    #[error("family has no nonconstant member")]
    AllConstantFamily,

    #[error("zero-mode component {0:e} above tolerance; project it out first")]
    ZeroMode(f64),

    #[error("integral did not converge: {0}")]
    DivergentIntegral(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("report schema mismatch in {path}: {reason}")]
    SchemaMismatch { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
