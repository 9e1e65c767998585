use std::fmt;

/// A syntax error with its 1-based column and the tokens that would have been accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            expected: Vec::new(),
            message: message.into(),
        }
    }

    pub fn expecting(column: usize, expected: &[&str], message: impl Into<String>) -> Self {
        ParseError {
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// `D` used in classical mode or `Xi` in quantum mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeError {
    pub column: usize,
    pub found: String,
    pub mode: String,
}

impl ModeError {
    pub fn new(column: usize, found: impl Into<String>, mode: impl Into<String>) -> Self {
        ModeError {
            column,
            found: found.into(),
            mode: mode.into(),
        }
    }
}

impl fmt::Display for ModeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wanted = if self.mode == "quantum" { "D" } else { "Xi" };
        write!(
            f,
            "mode error at column {}: {} is not available in {} mode (use {wanted})",
            self.column, self.found, self.mode
        )
    }
}

impl std::error::Error for ModeError {}
