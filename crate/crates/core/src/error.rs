use thiserror::Error;

/// Errors raised by the library.
///
/// `Infeasible` is kept apart from plain input validation: it marks inputs
/// that are well formed but describe a regime with no solution (probability
/// targets outside the reachable interval, a strategy window that is not
/// open), which the command-line front end reports with its own exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Schmidt coefficient {0}: expected a value in [0, 1]")]
    InvalidSchmidt(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("measurement vectors are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("outcome ensemble is empty")]
    EmptyEnsemble,
    #[error("outcome probabilities sum to {0}, expected 1")]
    Unnormalized(f64),
    #[error("{what} too large for exact enumeration: {got} > {max}")]
    TooLarge { what: &'static str, got: usize, max: usize },
    #[error("malformed lattice: {0}")]
    MalformedLattice(String),
}

impl Error {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
