use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("denominator evaluates to zero")]
    ZeroDenominator,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Knapsack-sourced reductions need a positive total profit.
    #[error("total profit is zero; normalize the instance first")]
    ProfitSumZero,

    #[error("goal value is zero")]
    GoalZero,

    #[error("knapsack instance has no subset of weight exactly equal to the bound")]
    InfeasibleInstance,

    #[error("assignment does not have the shape of an optimizer (auxiliary bit is 0)")]
    NotAnOptimizerShape,

    #[error("{n} variables exceed the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("no assignment is feasible")]
    NoFeasiblePoint,

    #[error("wrong objective sense: {0}")]
    WrongSense(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// The variant name, for reporting.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::InvalidInstance(_) => "InvalidInstance",
            Error::ProfitSumZero => "ProfitSumZero",
            Error::GoalZero => "GoalZero",
            Error::InfeasibleInstance => "InfeasibleInstance",
            Error::NotAnOptimizerShape => "NotAnOptimizerShape",
            Error::TooLarge { .. } => "TooLarge",
            Error::NoFeasiblePoint => "NoFeasiblePoint",
            Error::WrongSense(_) => "WrongSense",
            Error::Parse(_) => "Parse",
        }
    }
}
