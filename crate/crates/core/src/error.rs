use thiserror::Error;

/// Errors produced by the algebra, oracle, paradox and state layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dimension mismatch: {left} sites vs {right} sites")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what}: n = {n} exceeds the cap of {max}")]
    SizeCap { what: &'static str, n: usize, max: usize },

    #[error("{0}")]
    OutOfRange(String),

    #[error("index constraint violated: {0}")]
    IndexConstraint(String),

    #[error("observables {first} and {second} are not globally compatible")]
    Incompatible { first: usize, second: usize },

    #[error("inconsistent signs: {0}")]
    InconsistentSigns(String),

    #[error("site {site}: local sequences are not comparable ({reason})")]
    NotComparable { site: usize, reason: String },

    #[error("unsupported state {name} for n = {n}")]
    UnsupportedState { name: String, n: usize },
}

impl Error {
    /// True for errors caused by a size or range cap rather than malformed input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::SizeCap { .. } | Error::OutOfRange(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
