//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input (dimension mismatches, empty
    /// dictionaries, out-of-range parameters, non-finite data).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A vertex set that was supposed to span a d-simplex is affinely
    /// dependent (or numerically indistinguishable from dependent).
    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),

    /// The dictionary as a whole is degenerate, e.g. its affine hull has
    /// dimension below d.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The query point is required to be strictly interior and is not.
    #[error("not interior: {0}")]
    NotInterior(String),

    /// The query point lies outside the convex hull of the dictionary.
    #[error("outside hull: {0}")]
    OutsideHull(String),

    /// A quantity is undefined for the given configuration (e.g. the
    /// identification bound when the query sits on a shared face).
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// An enumeration guard tripped; the instance is beyond desk scale.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The assembled KKT system could not be factorized.
    #[error("singular KKT system: {0}")]
    SingularKkt(String),

    /// A solver failed in a way that is not a well-defined status
    /// (numerical breakdown, internal inconsistency).
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// Malformed file content (CSV/JSON/grid specs).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
