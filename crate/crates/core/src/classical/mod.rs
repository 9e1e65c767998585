//! The dispersionless limit: commuting symbols in `ξ`, the two-dimensional
//! Poisson bracket and the classical Adler map.

mod power;

pub use power::{power_images, verify_power};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::diffalg::{DiffPoly, Functional, Rational};
use crate::error::Result;
use crate::gdbracket::{gd_bracket, poisson_matrix, verify_inverse, verify_product, LaxShape, PoissonMatrix, Sampling};
use crate::psido::{Operator, PsiDO, Rule};
use crate::report::Report;

/// The commutative product `ξᵏ · f = f ξᵏ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Classical;

pub type Symbol = Operator<Classical>;

impl Rule for Classical {
    const SYMBOL: &'static str = "Xi";

    fn leibniz(_k: i32, j: u32) -> BigInt {
        if j == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }

    fn max_shift(_k: i32) -> Option<u32> {
        Some(0)
    }

    fn adler(l: &Symbol, x: &Symbol) -> Result<Symbol> {
        classical_adler(l, x)
    }

    fn bracket(a: &Symbol, b: &Symbol) -> Symbol {
        poisson2d(a, b)
    }
}

/// Reads a normal-ordered operator as a symbol, `∂ᵏ ↦ ξᵏ`.
pub fn symbol_of(a: &PsiDO) -> Symbol {
    Symbol::from_coeffs(a.coeffs().map(|(k, c)| (k, c.clone())), a.floor())
}

/// The normal-ordered operator with the same coefficients.
pub fn operator_of(s: &Symbol) -> PsiDO {
    PsiDO::from_coeffs(s.coeffs().map(|(k, c)| (k, c.clone())), s.floor())
}

/// `∂P/∂ξ`, termwise.
pub fn d_xi(p: &Symbol) -> Symbol {
    let coeffs = p
        .coeffs()
        .filter(|(k, _)| *k != 0)
        .map(|(k, c)| (k - 1, c.scale(&Rational::from_integer(k.into()))));
    Symbol::from_coeffs(coeffs, p.floor().map(|f| f - 1))
}

/// `∂P/∂x`: the total derivative of every coefficient.
pub fn d_x(p: &Symbol) -> Symbol {
    p.map_coeffs(DiffPoly::derivative)
}

/// `[[P, Q]] = P_x Q_ξ − Q_x P_ξ`.
pub fn poisson2d(p: &Symbol, q: &Symbol) -> Symbol {
    d_x(p).mul(&d_xi(q)).sub(&d_x(q).mul(&d_xi(p)))
}

/// `J(X) = [[L, X]]₊ L − [[L, (XL)₊]]`.
pub fn classical_adler(l: &Symbol, x: &Symbol) -> Result<Symbol> {
    let first = poisson2d(l, x).plus_part()?.mul(l);
    let xl = x.mul(l).plus_part()?;
    Ok(first.sub(&poisson2d(l, &xl)))
}

/// `{F, G}` at `L̂` with the classical Adler map.
pub fn classical_bracket(f: &Functional, g: &Functional, shape: &LaxShape) -> Result<Functional> {
    gd_bracket::<Classical>(f, g, shape)
}

pub fn classical_matrix(shape: &LaxShape) -> Result<PoissonMatrix> {
    poisson_matrix::<Classical>(shape)
}

/// Which half of the factorisation theorem to check in the classical limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem3 {
    /// `L̂ = ÂB̂` induces `+GD`.
    Product(LaxShape, LaxShape),
    /// `L̂ = Â⁻¹` to the given floor induces `−GD`.
    Inverse(LaxShape, i32),
}

pub fn verify_theorem3(case: &Theorem3, sampling: &Sampling) -> Result<Report> {
    match case {
        Theorem3::Product(a, b) => verify_product::<Classical>(a, b, sampling),
        Theorem3::Inverse(a, floor) => verify_inverse::<Classical>(a, *floor, sampling),
    }
}

#[cfg(test)]
mod tests;
