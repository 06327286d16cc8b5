use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point {re} + {im}i is not strictly inside the unit disc")]
    OutsideDisc { re: f64, im: f64 },

    #[error("value {re} + {im}i does not have unit modulus")]
    NotUnitModulus { re: f64, im: f64 },

    #[error("Blaschke denominator {0:e} is too close to zero")]
    NearSingularity(f64),

    #[error("index {index} out of range (expected < {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{samples} samples cannot determine {basis} basis functions")]
    UnderdeterminedSystem { samples: usize, basis: usize },

    #[error("hyperbolic segment endpoints coincide")]
    DegenerateSegment,

    #[error("basis matrix is rank deficient (pivot ratio {0:e})")]
    RankDeficient(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("architecture index {0} is outside 1..=30")]
    InvalidDimension(usize),

    #[error("every fitness evaluation failed")]
    AllEvaluationsFailed,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}: file contains no samples")]
    EmptyFile(PathBuf),

    #[error("unsupported signal format: {0}")]
    UnsupportedFormat(String),

    #[error("signal data truncated: {0}")]
    TruncatedData(String),

    #[error("annotation {index} lies outside the record (length {len})")]
    AnnotationOutOfRange { index: usize, len: usize },

    #[error("no beats to encode")]
    NoBeats,

    #[error("beat is flat (zero energy after trend removal)")]
    FlatBeat,

    #[error("bad magic bytes in compressed stream")]
    BadMagic,

    #[error("compressed stream ended early")]
    TruncatedStream,

    #[error("{0} bits of trailing data after the last beat")]
    TrailingData(usize),

    #[error("inconsistent architecture table: {0}")]
    InconsistentArchitectureTable(String),

    #[error("{what} needs a nonzero denominator")]
    ZeroDenominator { what: &'static str },

    #[error("signal of length {0} is too short for a 5-level decomposition")]
    TooShort(usize),

    #[error("original signal has no energy in wavelet band {0}")]
    ZeroBandEnergy(usize),

    #[error("need at least two beats, got {0}")]
    InsufficientBeats(usize),

    #[error("signals differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status for this error: 1 for I/O, 3 for failures of the
    /// encoder itself, 2 for everything caused by invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::AllEvaluationsFailed
            | Error::RankDeficient(_)
            | Error::NearSingularity(_)
            | Error::UnderdeterminedSystem { .. } => 3,
            _ => 2,
        }
    }
}
