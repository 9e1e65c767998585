//! The input language and the text, LaTeX and JSON renderings.
//!
//! Text output is the `Display` of each type and parses back to the same
//! value, so `parse(print(x)) == x` for canonical operators.

mod error;
pub mod json;
pub mod latex;
mod parser;

pub use error::{ModeError, ParseError};
pub use parser::{parse_field, parse_functional, parse_operator, parse_poly};

#[cfg(test)]
mod tests;
