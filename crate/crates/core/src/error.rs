use thiserror::Error;

/// Errors produced by the numerical routines and the protocol models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("quadrature did not converge: best estimate {estimate}, error bound {error}")]
    NoConvergence { estimate: f64, error: f64 },

    #[error("degenerate equation: every coefficient vanishes")]
    Degenerate,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }

    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
