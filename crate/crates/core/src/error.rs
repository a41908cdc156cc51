use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the loggap pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("LAS parse error at line {line}: {message}")]
    Las { line: usize, message: String },

    #[error("CSV parse error at record {record}: {message}")]
    Csv { record: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("missing mandatory LAS section {0}")]
    MissingSection(&'static str),

    #[error("no data rows")]
    NoDataRows,

    #[error("non-monotone depth at row {row} ({prev} then {next})")]
    NonMonotoneDepth { row: usize, prev: f64, next: f64 },

    #[error("non-uniform depth step at row {row}: expected {expected}, found {found}")]
    NonUniformStep { row: usize, expected: f64, found: f64 },

    #[error("curve {mnemonic} has {found} samples, expected {expected}")]
    LengthMismatch {
        mnemonic: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown curve mnemonic {0}")]
    UnknownCurve(String),

    #[error("duplicate curve mnemonic {0}")]
    DuplicateCurve(String),

    #[error("column {0} has zero variance")]
    ZeroVariance(String),

    #[error("column {column} has {found} observed samples, at least {required} required")]
    TooFewSamples {
        column: String,
        found: usize,
        required: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("log1p domain error: value {value} at index {index} is <= -1")]
    LogDomain { index: usize, value: f64 },

    #[error("curve {0} has no observed samples")]
    AllMissing(String),

    #[error("spectrum is not conjugate-symmetric at bin {bin}")]
    NotConjugateSymmetric { bin: usize },

    #[error("detrend cutoff {cutoff} out of range for series length {len}")]
    CutoffOutOfRange { cutoff: usize, len: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("quantile order {0} outside [0, 1]")]
    QuantileOrder(f64),

    #[error("percentile {0} outside [0, 100]")]
    PercentileRange(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("window size {n} must be >= 1 and smaller than curve length {len}")]
    WindowTooLarge { n: usize, len: usize },

    #[error("gap at {start} (length {length}) is not anchored on both sides")]
    UnanchoredGap { start: usize, length: usize },

    #[error("gap at {start} needs {required} observed anchors per side, found {left} left and {right} right")]
    TooFewAnchors {
        start: usize,
        required: usize,
        left: usize,
        right: usize,
    },

    #[error("batch of {0} rows is too small for train-mode batch normalization")]
    BatchTooSmall(usize),

    #[error("insufficient training rows: {found} observed, at least {required} required")]
    InsufficientRows { found: usize, required: usize },

    #[error("feature row {0} not available")]
    MissingFeatureRow(usize),

    #[error("cannot place gap of length {length}: {reason}")]
    GapPlacement { length: usize, reason: String },

    #[error("degenerate reference: 99th and 1st percentiles are equal ({0})")]
    DegenerateReference(f64),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad or unusable input data.
    Data,
    /// A numeric procedure failed (degenerate statistics, divergence).
    Numeric,
    /// Inconsistent configuration.
    Config,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ZeroVariance(_)
            | Error::NonFinite(_)
            | Error::DegenerateReference(_)
            | Error::NotConjugateSymmetric { .. } => ErrorKind::Numeric,
            Error::InvalidConfig(_)
            | Error::QuantileOrder(_)
            | Error::PercentileRange(_)
            | Error::CutoffOutOfRange { .. }
            | Error::WindowTooLarge { .. } => ErrorKind::Config,
            Error::Context { source, .. } => source.kind(),
            _ => ErrorKind::Data,
        }
    }

    pub fn context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
