//! Formal pseudo-differential operators `Σ cₖ ∂ᵏ` with coefficients on the left.
//!
//! Operators with an infinite tail are stored down to a certification floor:
//! every coefficient at or above the floor is exact, nothing below it is
//! known. Products propagate floors so a truncated result can never be
//! mistaken for an exact one.

mod operator;

pub use operator::{Operator, Rule};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diffalg::binomial;
use crate::error::Result;

/// The noncommutative product `∂ᵏ ∘ f = Σⱼ C(k,j) f⁽ʲ⁾ ∂ᵏ⁻ʲ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Quantum;

pub type PsiDO = Operator<Quantum>;

impl Rule for Quantum {
    const SYMBOL: &'static str = "D";

    fn leibniz(k: i32, j: u32) -> BigInt {
        if k >= 0 && j as i64 > k as i64 {
            return BigInt::zero();
        }
        binomial(k as i64, j)
    }

    fn max_shift(k: i32) -> Option<u32> {
        (k >= 0).then_some(k as u32)
    }

    fn adler(l: &PsiDO, x: &PsiDO) -> Result<PsiDO> {
        adler_map(l, x)
    }

    fn bracket(a: &PsiDO, b: &PsiDO) -> PsiDO {
        a.commutator(b)
    }
}

/// `J_L(X) = (LX)₊L − L(XL)₊`.
pub fn adler_map(l: &PsiDO, x: &PsiDO) -> Result<PsiDO> {
    let lx = l.mul(x).plus_part()?;
    let xl = x.mul(l).plus_part()?;
    Ok(lx.mul(l).sub(&l.mul(&xl)))
}
