use thiserror::Error;

use crate::syntax::{ModeError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A coefficient below the certified truncation floor was requested.
    #[error("power {power} is below the certified window (floor {floor}); increase the depth")]
    FloorTooHigh { power: i32, floor: i32 },

    #[error("not a total derivative (normal-form remainder {remainder})")]
    NotExact { remainder: String },

    #[error("operator is not monic (leading coefficient {leading})")]
    NotMonic { leading: String },

    #[error("field {field} lies outside the certified window")]
    OutOfWindow { field: String },

    #[error("expression is not linear in the probe {probe} (term {term})")]
    NotLinear { probe: String, term: String },

    #[error("invalid generator name {0:?}")]
    InvalidGenerator(String),

    #[error("invalid Lax shape: {0}")]
    InvalidShape(String),

    #[error("inconsistent reduction: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Mode(#[from] ModeError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
