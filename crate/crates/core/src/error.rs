use thiserror::Error;

/// Errors raised by the library. Numerical-invariant violations are kept
/// distinct from input errors so the CLI can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },

    #[error("k-grid too coarse: n_k = {n_k} but exact k-integration on a window of {width} sites needs n_k >= 2W+1 = {required}")]
    GridTooCoarse { n_k: usize, width: usize, required: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("site {site} lies outside the window [{n_min}, {n_max}]")]
    OutsideWindow { site: i64, n_min: i64, n_max: i64 },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("scalar Wigner function is not real (max |Im| = {0:e})")]
    ComplexValued(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported potential: {0}")]
    UnsupportedPotential(String),

    #[error("unsupported decoherence channel: {0}")]
    UnsupportedChannel(String),

    #[error("boundary leak {leak:e} exceeds tolerance {limit:e}{context}")]
    BoundaryLeak { leak: f64, limit: f64, context: String },

    #[error("time step too large: dt = {dt} with spectral-norm estimate {norm} (dt*norm = {product} > {limit})")]
    StepTooLarge { dt: f64, norm: f64, product: f64, limit: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("two-path deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    Deviation { deviation: f64, tolerance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for violations detected while computing (leaks, deviations,
    /// broken invariants), as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BoundaryLeak { .. }
                | Error::Deviation { .. }
                | Error::NotHermitian(_)
                | Error::ComplexValued(_)
                | Error::NotNormalized(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
