//! Exact pseudo-differential operator calculus over differential polynomial
//! rings, with the second Gelfand–Dickey bracket and checks of its behaviour
//! under products, inverses, Miura maps and the dispersionless limit.

pub mod classical;
pub mod diffalg;
pub mod error;
pub mod gdbracket;
pub mod miura;
pub mod psido;
pub mod report;
pub mod syntax;

pub use error::{Error, Result};
pub use report::Report;
