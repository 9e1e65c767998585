use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{binomial, DiffPoly, Generator, Rational, Var};
use crate::error::Error;

/// A finite-order differential operator `Σₖ cₖ ∂ᵏ` with coefficients on the left.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LocalOperator {
    coeffs: BTreeMap<u32, DiffPoly>,
}

impl LocalOperator {
    pub fn zero() -> Self {
        LocalOperator::default()
    }

    pub fn identity() -> Self {
        Self::multiplication(DiffPoly::one())
    }

    pub fn multiplication(c: DiffPoly) -> Self {
        let mut op = Self::zero();
        op.add_coeff(0, c);
        op
    }

    /// `c ∂ᵏ`
    pub fn monomial(c: DiffPoly, k: u32) -> Self {
        let mut op = Self::zero();
        op.add_coeff(k, c);
        op
    }

    /// The derivation `∂`.
    pub fn derivation() -> Self {
        Self::monomial(DiffPoly::one(), 1)
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, DiffPoly)>>(coeffs: I) -> Self {
        let mut op = Self::zero();
        for (k, c) in coeffs {
            op.add_coeff(k, c);
        }
        op
    }

    pub fn add_coeff(&mut self, k: u32, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> DiffPoly {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (u32, &DiffPoly)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σₖ cₖ · ∂ᵏg`.
    pub fn apply(&self, g: &DiffPoly) -> DiffPoly {
        let Some(top) = self.order() else {
            return DiffPoly::zero();
        };
        let jets = g.derivatives_up_to(top);
        let mut out = DiffPoly::zero();
        for (&k, c) in &self.coeffs {
            out += c * &jets[k as usize];
        }
        out
    }

    /// Operator composition `self ∘ other`, re-expanded with coefficients on the left.
    pub fn compose(&self, other: &LocalOperator) -> LocalOperator {
        let mut out = LocalOperator::zero();
        let Some(top) = self.order() else {
            return out;
        };
        for (&m, b) in &other.coeffs {
            let jets = b.derivatives_up_to(top);
            for (&k, a) in &self.coeffs {
                for j in 0..=k {
                    let db = &jets[j as usize];
                    if db.is_zero() {
                        break;
                    }
                    let c = Rational::from_integer(binomial(k as i64, j));
                    out.add_coeff(k + m - j, (a * db).scale(&c));
                }
            }
        }
        out
    }

    /// The formal adjoint `Σ (−∂)ᵏ ∘ cₖ`.
    pub fn adjoint(&self) -> LocalOperator {
        let mut out = LocalOperator::zero();
        for (&k, c) in &self.coeffs {
            let jets = c.derivatives_up_to(k);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for j in 0..=k {
                let coef = Rational::from_integer(binomial(k as i64, j) * sign);
                out.add_coeff(k - j, jets[j as usize].scale(&coef));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LocalOperator {
        if c.is_zero() {
            return LocalOperator::zero();
        }
        LocalOperator {
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, p.scale(c))).collect(),
        }
    }

    pub fn neg(&self) -> LocalOperator {
        LocalOperator {
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, -p)).collect(),
        }
    }

    pub fn add(&self, other: &LocalOperator) -> LocalOperator {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_coeff(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LocalOperator) -> LocalOperator {
        self.add(&other.neg())
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> LocalOperator {
        LocalOperator::from_coeffs(self.coeffs.iter().map(|(&k, c)| (k, f(c))))
    }

    pub fn substitute(&self, map: &BTreeMap<Generator, DiffPoly>) -> LocalOperator {
        self.map_coeffs(|c| c.substitute(map))
    }

    /// Reads off the operator `D` from a polynomial `D(w)` that is linear and
    /// homogeneous in the probe generator `w`.
    pub fn from_probe(p: &DiffPoly, w: Generator) -> Result<LocalOperator, Error> {
        let mut op = LocalOperator::zero();
        for (m, c) in p.terms() {
            let probes: Vec<_> = m.factors().iter().filter(|(v, _)| v.gen == w).collect();
            match probes.as_slice() {
                [(v, 1)] => {
                    let rest = m.without_var(*v);
                    op.add_coeff(v.order, DiffPoly::term(c.clone(), rest));
                }
                _ => {
                    return Err(Error::NotLinear {
                        probe: w.to_string(),
                        term: m.to_string(),
                    })
                }
            }
        }
        Ok(op)
    }

    /// `D(w)` for a bare generator `w`.
    pub fn applied_to_generator(&self, w: Generator) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (&k, c) in &self.coeffs {
            out += c * &DiffPoly::var(Var::new(w, k));
        }
        out
    }

    /// Returns `c` if the operator is exactly `c ∂` with a constant `c`.
    pub fn as_constant_derivation(&self) -> Option<Rational> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let c = self.coeffs.get(&1)?.as_constant()?;
        (!c.is_zero()).then_some(c)
    }
}

impl fmt::Display for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (&k, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let single = c.len() == 1;
            match k {
                0 if single => write!(f, "{c}")?,
                0 => write!(f, "({c})")?,
                _ => {
                    if c.is_one() {
                    } else if single {
                        write!(f, "{c}*")?;
                    } else {
                        write!(f, "({c})*")?;
                    }
                    if k == 1 {
                        f.write_str("D")?;
                    } else {
                        write!(f, "D^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::Functional;

    fn g(name: &str) -> Generator {
        Generator::plain(name)
    }
    fn d(name: &str, k: u32) -> DiffPoly {
        DiffPoly::gen_derivative(g(name), k)
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(LocalOperator::derivation().adjoint(), LocalOperator::derivation().neg());
        let mult = LocalOperator::multiplication(d("u", 0));
        assert_eq!(mult.adjoint(), mult);
        // (u∂ + v)† = −u∂ − u′ + v
        let op = LocalOperator::from_coeffs([(1, d("u", 0)), (0, d("v", 0))]);
        let expected = LocalOperator::from_coeffs([(1, -d("u", 0)), (0, d("v", 0) - d("u", 1))]);
        assert_eq!(op.adjoint(), expected);
        assert_eq!(op.adjoint().adjoint(), op);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let a = LocalOperator::from_coeffs([(2, d("u", 0)), (0, d("v", 1))]);
        let b = LocalOperator::from_coeffs([(1, d("v", 0)), (0, d("u", 0).pow(2))]);
        let f = d("f", 0);
        assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
    }

    #[test]
    fn adjoint_pairing_is_integration_by_parts() {
        let op = LocalOperator::from_coeffs([(3, d("u", 0)), (1, d("u", 1).pow(2)), (0, d("v", 0))]);
        let (f, h) = (d("f", 0), d("h", 0));
        let lhs = &f * &op.apply(&h);
        let rhs = &op.adjoint().apply(&f) * &h;
        assert!(Functional::new(lhs - rhs).is_zero());
    }

    #[test]
    fn probe_round_trip() {
        let w = g("_w");
        let op = LocalOperator::from_coeffs([(2, d("u", 0)), (0, DiffPoly::integer(3))]);
        let p = op.applied_to_generator(w);
        assert_eq!(LocalOperator::from_probe(&p, w).unwrap(), op);
        let bad = &p * &DiffPoly::gen(w);
        assert!(LocalOperator::from_probe(&bad, w).is_err());
    }
}
