use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter violates its domain.
    #[error("invalid value for `{field}`: {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("score has no events")]
    EmptyScore,

    #[error("piano key {0} outside 1..=88")]
    KeyOutOfRange(i64),

    #[error("sample spacing {dt} s too coarse for note key {key} ({freq:.2} Hz): need dt < {limit:e} s")]
    DtTooCoarse { key: u8, freq: f64, dt: f64, limit: f64 },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("{what}: need at least {needed}, got {got}")]
    TooShort {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("Keller-Miksis left-hand coefficient vanishes at tau = {tau} (r = {r}, r' = {r_dot})")]
    Singularity { tau: f64, r: f64, r_dot: f64 },

    #[error("bubble collapsed at tau = {tau} (r = {r})")]
    Collapse { tau: f64, r: f64 },

    #[error("oscillator is overdamped (omega0^2 = {omega0_sq}, 1/(4Q^2) = {damping_sq}); no damped frequency")]
    Overdamped { omega0_sq: f64, damping_sq: f64 },

    #[error("forcing covers tau up to {covered}, simulation needs {needed}")]
    ForcingTooShort { covered: f64, needed: f64 },

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("normal equations are singular; use a ridge coefficient beta > 0")]
    SingularSystem,

    #[error("k_max = {k_max} leaves no usable samples (sequence length {len})")]
    KMaxTooLarge { k_max: usize, len: usize },

    #[error("frequency band [{lo}, {hi}] Hz contains no spectral bins")]
    EmptyBand { lo: f64, hi: f64 },

    #[error("harmonic {k} of {f0} Hz lies above Nyquist {nyquist} Hz")]
    HarmonicOutOfRange { k: usize, f0: f64, nyquist: f64 },

    #[error("signal has {found} local maxima, need at least {needed}")]
    TooFewExtrema { needed: usize, found: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: not a 16-bit PCM mono WAV file ({reason})")]
    BadWav { path: PathBuf, reason: &'static str },
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { field, value, reason }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
