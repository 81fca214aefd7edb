use std::fmt;
use std::path::PathBuf;

/// One violated parameter invariant, keyed by the field name used on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl Violation {
    pub fn new(field: &'static str, message: impl Into<String>) -> Self {
        Violation { field, message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown figure {0:?} (expected one of fig2, fig5, fig6, fig7, fig8)")]
    UnknownFigure(String),

    #[error("no unique steady state: null space dimension is {dimension}")]
    NoUniqueSteadyState { dimension: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("integration became unstable at t = {time}: {reason}")]
    Unstable { time: f64, reason: String },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("at delta_c = {delta_c}: {source}")]
    AtDetuning {
        delta_c: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoUniqueSteadyState { .. } | Error::Numerical(_) | Error::Unstable { .. } | Error::Singular(_) => true,
            Error::AtDetuning { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations.iter().map(|v| v.message.as_str()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
