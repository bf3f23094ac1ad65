use thiserror::Error;

use crate::game::ElementId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("rule violation: {0}")]
    Rule(String),

    #[error("{side} forfeits: {reason}")]
    Forfeit { side: Side, reason: String },

    #[error("element {0} is out of range for this board")]
    UnknownElement(ElementId),

    #[error("infeasible enumeration of {label}: closed-form count {count:.6e} exceeds cap {cap}")]
    InfeasibleEnumeration { label: String, count: f64, cap: u64 },

    #[error("size cap exceeded: {0}")]
    Cap(String),

    #[error("strategy failure: {0}")]
    StrategyFailure(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

/// One of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Waiter,
    Client,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Waiter => f.write_str("Waiter"),
            Side::Client => f.write_str("Client"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
