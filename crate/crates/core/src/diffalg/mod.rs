//! Exact differential polynomial algebra over ℚ.
//!
//! Everything else in the crate is built on [`DiffPoly`]: total and
//! variational derivatives, Fréchet linearisations ([`LocalOperator`]), and
//! functionals modulo total derivatives ([`Functional`]).

mod functional;
mod generator;
mod local;
mod poly;

pub use functional::{ibp_normal_form, integrate_exact, Functional};
pub use generator::{Generator, Var};
pub use local::LocalOperator;
pub use poly::{DiffPoly, Monomial};

use num_bigint::BigInt;
use num_traits::One;

pub type Rational = num_rational::BigRational;

/// `p/q` as an exact rational.
pub fn q(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Generalised binomial coefficient `k(k−1)⋯(k−j+1)/j!`, valid for negative `k`.
pub fn binomial(k: i64, j: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j as i64 {
        num *= k - i;
        den *= i + 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(-3, 0), BigInt::from(1));
    }
}
