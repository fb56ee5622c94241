use thiserror::Error;

/// Errors reported by validators and computations.
///
/// Validators fail on the first violated invariant and carry a witness
/// (element indices, degree, residual) in the message.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group table is not closed or malformed: {0}")]
    GroupTable(String),
    #[error("group axiom violated: {0}")]
    GroupAxiom(String),
    #[error("character table invalid: {0}")]
    Characters(String),
    #[error("representation invalid: {0}")]
    Representation(String),
    #[error("complex invalid: {0}")]
    Complex(String),
    #[error("rank decision is ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("cohomology basis inconsistent: {0}")]
    CohomologyBasis(String),
    #[error("isotropic pivot chain in symmetric Gram-Schmidt: {0}")]
    IsotropicPivot(String),
    #[error("matrix logarithm branch failure: {0}")]
    LogBranch(String),
    #[error("spectral decomposition failed: {0}")]
    Spectral(String),
    #[error("cutoff collides with an eigenvalue: {0}")]
    CutoffCollision(String),
    #[error("Morse system invalid: {0}")]
    Morse(String),
    #[error("missing fixed-point or component data: {0}")]
    FixedPointData(String),
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
