use thiserror::Error;

/// Crate-wide error type. Domain violations carry the offending value so
/// callers can report actionable messages without re-deriving context.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical precondition was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation is not defined for this kernel model.
    #[error("unsupported kernel model for {operation}: {model}")]
    UnsupportedModel { operation: &'static str, model: String },

    /// Coherence has no temperature information content (C = 1) or is not a
    /// valid visibility, so the Fisher-information ratio is singular.
    #[error("singular coherence value {value}: quantum Fisher information undefined")]
    SingularCoherence { value: f64 },

    /// Monte Carlo comparison requested outside the weak-dephasing guard.
    #[error("dephasing exponent {gamma_phi:.6} exceeds the regime guard {guard:.6}; weak-dephasing comparison is not meaningful here")]
    OutOfRegime { gamma_phi: f64, guard: f64 },

    /// Probe visibility too small to divide out reliably.
    #[error("probe visibility {value:.3e} at delay {delta:.6e} is below the calibration floor {floor:.1e}")]
    UnreliableCalibration { delta: f64, value: f64, floor: f64 },

    /// A correction was applied twice or in an invalid order.
    #[error("invalid estimator state: {0}")]
    State(String),

    /// Spectrum has no positive values to normalize against.
    #[error("degenerate spectrum: maximum value {max:.3e} is not positive")]
    DegenerateSpectrum { max: f64 },

    /// Not enough usable points for the requested numerical operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed tabular input; `line` is 1-based within the file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Run configuration failed validation (schema or cross-field).
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code this error maps to under the CLI contract:
    /// configuration and schema problems exit 2, runtime failures exit 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Domain(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
