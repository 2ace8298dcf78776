use std::path::PathBuf;

/// Errors produced by the reconstruction library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("signal must have at least 2 samples, got {len}")]
    SignalTooShort { len: usize },

    #[error("signal sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("passband half-width {half_width} exceeds floor(N/2) = {max} for N = {len}")]
    PassbandOutOfRange {
        half_width: usize,
        max: usize,
        len: usize,
    },

    #[error("period {period} does not divide signal length {len}")]
    NotDivisible { period: usize, len: usize },

    #[error(
        "{requested} modules requested for period {period}, but at most floor(T/2) = {max} modules can be applied"
    )]
    ModuleCap {
        requested: usize,
        period: usize,
        max: usize,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("guard fraction {guard} leaves no interior samples for N = {len}")]
    EmptyWindow { guard: f64, len: usize },

    #[error("signal has zero power")]
    ZeroPower,

    #[error("kernel has {taps} taps, longer than signal length {len}")]
    KernelTooLong { taps: usize, len: usize },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient metadata mismatch: {0}")]
    MetaMismatch(String),

    #[error("unsupported coefficient file schema {found:?} (expected {expected:?})")]
    Schema {
        found: String,
        expected: &'static str,
    },

    #[error("malformed coefficient file {path}: {reason}")]
    CoeffFile { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by invalid parameters rather than by the
    /// environment (file system, malformed files).
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Io { .. } | Error::CoeffFile { .. } | Error::Schema { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
