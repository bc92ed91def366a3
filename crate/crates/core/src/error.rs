use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: {needed} exceeds the enumeration limit of {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("no feasible (delta, gamma) pair on the lattice for epsilon = {0}")]
    NoFeasibleParams(f64),

    #[error("interval parameters violate {0}")]
    InfeasibleParams(&'static str),

    #[error("boosters are undefined for a Hamiltonian graph")]
    AlreadyHamiltonian,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
