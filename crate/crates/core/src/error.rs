use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid payout table: {0}")]
    InvalidTable(String),

    /// A table-defined gamble was asked about a waiting time past its last row.
    #[error("waiting time {n} is outside the support of a {len}-row table")]
    OutOfSupport { n: u64, len: usize },

    /// Neither the tail bound nor the divergence test resolved the series.
    #[error("series inconclusive after {terms} terms")]
    TruncationInconclusive { terms: u64 },

    #[error("series term {n} is not a number")]
    NonFiniteTerm { n: u64 },

    #[error("utility function returned a non-finite value at wealth {wealth}")]
    UtilityDomain { wealth: f64 },

    /// The function to be solved has no bracketable sign change.
    #[error("no sign change: {0}")]
    NoSignChange(String),

    #[error("solver did not reach tolerance {tol}: residual {residual} at {at}")]
    SolverTolerance { tol: f64, residual: f64, at: f64 },

    #[error("trajectory went bankrupt in round {round}")]
    BankruptTrajectory { round: usize },

    #[error("non-positive growth factor {factor} for waiting time {n}")]
    NonpositiveReturn { n: u64, factor: f64 },

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::InvalidTable(e.to_string())
    }
}
