use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("{0}")]
    Validation(String),
    /// An order that is not a lattice, with a pair lacking a join or meet.
    #[error("not a lattice: {a} and {b} have no {missing}")]
    NotALattice { a: String, b: String, missing: &'static str },
    /// The requested enumeration exceeds a configured limit.
    #[error("{what} needs {requested} items, limit is {limit}")]
    Budget { what: String, requested: u128, limit: u128 },
    /// An identity that the theory guarantees did not hold.
    #[error("{0}")]
    Invariant(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
