//! Functionals `∫ p dx`, i.e. differential polynomials modulo total derivatives.
//!
//! Canonical representatives come from a triangular basis of the image of `∂`.
//! Order monomials by their factors listed in descending `(order, generator)`
//! order, compared lexicographically. For a monomial `b` with largest factor
//! `v`, the leading term of `∂b` is `b` with `v` replaced by `v′`, and this map
//! is injective. A monomial `m` is therefore a leading term of the image ("a
//! pivot") exactly when its largest factor `v` has order ≥ 1, occurs once, and
//! every other factor is at most `v` lowered by one. Subtracting multiples of
//! `∂b` from the largest pivot until none remain leaves a unique remainder,
//! which is zero precisely when the input is a total derivative.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{DiffPoly, Generator, Monomial, Rational, Var};
use crate::error::Error;

#[derive(Clone, PartialEq, Eq)]
struct NormalKey {
    // factors expanded by multiplicity, sorted descending by (order, generator)
    descending: Vec<Var>,
    monomial: Monomial,
}

impl NormalKey {
    fn new(monomial: Monomial) -> Self {
        let mut descending: Vec<Var> = monomial
            .factors()
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
            .collect();
        descending.sort_by(|a, b| b.cmp_by_order(a));
        NormalKey {
            descending,
            monomial,
        }
    }
}

impl PartialOrd for NormalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.descending.iter().zip(&other.descending) {
            match x.cmp_by_order(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.descending.len().cmp(&other.descending.len())
    }
}

/// If `m` is the leading monomial of `∂b`, returns `b` and the coefficient of
/// `m` in `∂b`.
fn pivot_preimage(m: &Monomial) -> Option<(Monomial, u32)> {
    let (top, exp) = m.leading_var_by_order()?;
    if top.order == 0 || exp != 1 {
        return None;
    }
    let lowered = Var::new(top.gen, top.order - 1);
    let dominated = m
        .factors()
        .iter()
        .filter(|(v, _)| *v != top)
        .all(|(v, _)| v.cmp_by_order(&lowered) != Ordering::Greater);
    if !dominated {
        return None;
    }
    let b = m.without_var(top).times_var(lowered);
    let e = b.exponent(lowered);
    Some((b, e))
}

/// Splits `p` as `remainder + ∂(antiderivative)` with a canonical remainder.
fn reduce(p: &DiffPoly) -> (DiffPoly, DiffPoly) {
    let mut work: BTreeMap<NormalKey, Rational> = p
        .terms()
        .map(|(m, c)| (NormalKey::new(m.clone()), c.clone()))
        .collect();
    let mut remainder = BTreeMap::new();
    let mut anti = DiffPoly::zero();
    while let Some((key, c)) = work.pop_last() {
        let m = key.monomial;
        match pivot_preimage(&m) {
            None => {
                remainder.insert(m, c);
            }
            Some((b, e)) => {
                let factor = c / Rational::from_integer(BigInt::from(e));
                let db = DiffPoly::term(Rational::from_integer(1.into()), b.clone()).derivative();
                for (t, tc) in db.terms() {
                    if *t == m {
                        continue;
                    }
                    let key = NormalKey::new(t.clone());
                    let entry = work.entry(key.clone()).or_insert_with(Rational::zero);
                    *entry -= &factor * tc;
                    if entry.is_zero() {
                        work.remove(&key);
                    }
                }
                anti.add_term(b, factor);
            }
        }
    }
    (DiffPoly::from_raw(remainder), anti)
}

/// Canonical representative of `p` modulo total derivatives.
pub fn ibp_normal_form(p: &DiffPoly) -> DiffPoly {
    reduce(p).0
}

/// Returns `q` with `∂q = p` and no constant term, or [`Error::NotExact`].
pub fn integrate_exact(p: &DiffPoly) -> Result<DiffPoly, Error> {
    let (rest, anti) = reduce(p);
    if rest.is_zero() {
        Ok(anti)
    } else {
        Err(Error::NotExact {
            remainder: rest.to_string(),
        })
    }
}

/// `∫ p dx` with `p` held in integration-by-parts normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Functional {
    integrand: DiffPoly,
}

impl Functional {
    pub fn new(integrand: DiffPoly) -> Self {
        Functional {
            integrand: ibp_normal_form(&integrand),
        }
    }

    pub fn zero() -> Self {
        Functional::default()
    }

    pub fn integrand(&self) -> &DiffPoly {
        &self.integrand
    }

    pub fn is_zero(&self) -> bool {
        self.integrand.is_zero()
    }

    pub fn variational_derivative(&self, g: Generator) -> DiffPoly {
        self.integrand.variational_derivative(g)
    }

    /// Independent zero test: the Euler operator vanishes in every generator
    /// and the constant term is zero.
    pub fn is_zero_by_euler(p: &DiffPoly) -> bool {
        p.constant_term().is_zero()
            && p
                .generators()
                .into_iter()
                .all(|g| p.variational_derivative(g).is_zero())
    }

    pub fn generators(&self) -> std::collections::BTreeSet<Generator> {
        self.integrand.generators()
    }

    pub fn substitute(&self, map: &BTreeMap<Generator, DiffPoly>) -> Functional {
        Functional::new(self.integrand.substitute(map))
    }

    pub fn scale(&self, c: &Rational) -> Functional {
        Functional {
            integrand: self.integrand.scale(c),
        }
    }

    pub fn neg(&self) -> Functional {
        Functional {
            integrand: -&self.integrand,
        }
    }

    pub fn add(&self, other: &Functional) -> Functional {
        // normal forms are linear
        Functional {
            integrand: &self.integrand + &other.integrand,
        }
    }

    pub fn sub(&self, other: &Functional) -> Functional {
        Functional {
            integrand: &self.integrand - &other.integrand,
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "int({})", self.integrand)
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
