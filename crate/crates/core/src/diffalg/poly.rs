use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Generator, LocalOperator, Rational, Var};

/// A product of jet variables with positive exponents, sorted by [`Var`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeated variables.
    pub fn from_factors<I: IntoIterator<Item = (Var, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Total number of derivatives carried by the monomial.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(v, e)| v.order * e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn contains_generator(&self, g: Generator) -> bool {
        self.0.iter().any(|(v, _)| v.gen == g)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Multiplies by `v` once.
    pub fn times_var(&self, v: Var) -> Monomial {
        let mut out = self.0.clone();
        match out.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => out[i].1 += 1,
            Err(i) => out.insert(i, (v, 1)),
        }
        Monomial(out)
    }

    /// Divides by `v` once; `v` must be present.
    pub fn without_var(&self, v: Var) -> Monomial {
        let mut out = self.0.clone();
        let i = out
            .binary_search_by(|(w, _)| w.cmp(&v))
            .expect("variable not present in monomial");
        if out[i].1 == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Monomial(out)
    }

    /// Replaces one factor `v` by `v'`.
    pub(crate) fn raise(&self, v: Var) -> Monomial {
        self.without_var(v).times_var(v.raised())
    }

    /// Largest variable in the (order, generator) ordering.
    pub(crate) fn leading_var_by_order(&self) -> Option<(Var, u32)> {
        self.0
            .iter()
            .copied()
            .max_by(|a, b| a.0.cmp_by_order(&b.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic: total degree first, then the factor lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An exact differential polynomial with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn gen(g: Generator) -> Self {
        Self::var(Var::new(g, 0))
    }

    pub fn gen_derivative(g: Generator, order: u32) -> Self {
        Self::var(Var::new(g, order))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = DiffPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Returns the constant if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Returns the generator if the polynomial is exactly one undifferentiated field.
    pub fn as_generator(&self) -> Option<Generator> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        match m.factors() {
            [(v, 1)] if v.order == 0 && c.is_one() => Some(v.gen),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> DiffPoly {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn generators(&self) -> std::collections::BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.gen))
            .collect()
    }

    pub fn contains_generator(&self, g: Generator) -> bool {
        self.terms.keys().any(|m| m.contains_generator(g))
    }

    /// Highest derivative order of `g` present, if any.
    pub fn max_order(&self, g: Generator) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .filter(|(v, _)| v.gen == g)
            .map(|(v, _)| v.order)
            .max()
    }

    /// The total derivative `∂p`.
    pub fn derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for &(v, e) in m.factors() {
                out.add_term(m.raise(v), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn nth_derivative(&self, n: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// `[p, ∂p, ∂²p, …, ∂ⁿp]`.
    pub fn derivatives_up_to(&self, n: u32) -> Vec<DiffPoly> {
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(self.clone());
        for i in 0..n as usize {
            let next = out[i].derivative();
            out.push(next);
        }
        out
    }

    /// Partial derivative with respect to a single jet variable.
    pub fn partial(&self, v: Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.without_var(v), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// The Euler operator `Σₖ (−∂)ᵏ ∂p/∂g⁽ᵏ⁾`.
    pub fn variational_derivative(&self, g: Generator) -> DiffPoly {
        let Some(top) = self.max_order(g) else {
            return DiffPoly::zero();
        };
        // Horner: P₀ − ∂(P₁ − ∂(P₂ − …)).
        let mut acc = self.partial(Var::new(g, top));
        for k in (0..top).rev() {
            acc = self.partial(Var::new(g, k)) - acc.derivative();
        }
        acc
    }

    /// Linearisation of `p` in the direction of `g`, as `Σₖ (∂p/∂g⁽ᵏ⁾) ∂ᵏ`.
    pub fn frechet_derivative(&self, g: Generator) -> LocalOperator {
        let mut op = LocalOperator::zero();
        if let Some(top) = self.max_order(g) {
            for k in 0..=top {
                op.add_coeff(k, self.partial(Var::new(g, k)));
            }
        }
        op
    }

    /// Substitutes each listed generator by a polynomial; derivatives of a
    /// generator become total derivatives of its image.
    pub fn substitute(&self, map: &BTreeMap<Generator, DiffPoly>) -> DiffPoly {
        if map.is_empty() || !self.generators().iter().any(|g| map.contains_key(g)) {
            return self.clone();
        }
        let mut jets: BTreeMap<Generator, Vec<DiffPoly>> = BTreeMap::new();
        for g in self.generators() {
            if let (Some(image), Some(top)) = (map.get(&g), self.max_order(g)) {
                jets.insert(g, image.derivatives_up_to(top));
            }
        }
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = DiffPoly::one();
            for &(v, e) in m.factors() {
                match jets.get(&v.gen) {
                    Some(images) => acc = &acc * &images[v.order as usize].pow(e),
                    None => kept.push((v, e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            let kept = Monomial(kept);
            for (am, ac) in acc.terms {
                out.add_term(am.mul(&kept), ac * c);
            }
        }
        out
    }

    /// Sets the listed generators (and all their derivatives) to zero.
    pub fn eliminate(&self, gens: &[Generator]) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !gens.iter().any(|&g| m.contains_generator(g)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn from_raw(terms: BTreeMap<Monomial, Rational>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        DiffPoly { terms }
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Generator> for DiffPoly {
    fn from(g: Generator) -> Self {
        DiffPoly::gen(g)
    }
}

impl From<Var> for DiffPoly {
    fn from(v: Var) -> Self {
        DiffPoly::var(v)
    }
}

impl From<Rational> for DiffPoly {
    fn from(c: Rational) -> Self {
        DiffPoly::constant(c)
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: DiffPoly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += lhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: DiffPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(mut self) -> DiffPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -self.clone()
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        self += rhs;
        self
    }
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, rhs: DiffPoly) -> DiffPoly {
        self -= rhs;
        self
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        if self.is_zero() || rhs.is_zero() {
            return DiffPoly::zero();
        }
        // hashing beats ordered inserts here; integer products skip the gcd
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = if ca.is_integer() && cb.is_integer() {
                    Rational::from_integer(ca.numer() * cb.numer())
                } else {
                    ca * cb
                };
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                }
            }
        }
        DiffPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for DiffPoly {
    fn sum<I: Iterator<Item = DiffPoly>>(iter: I) -> Self {
        iter.fold(DiffPoly::zero(), |acc, p| acc + p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::q;

    fn u() -> Generator {
        Generator::plain("u")
    }
    fn v() -> Generator {
        Generator::plain("v")
    }
    fn d(g: Generator, k: u32) -> DiffPoly {
        DiffPoly::gen_derivative(g, k)
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(d(u(), 0).derivative(), d(u(), 1));
        let uv = &d(u(), 0) * &d(v(), 0);
        assert_eq!(uv.derivative(), &d(u(), 1) * &d(v(), 0) + &d(u(), 0) * &d(v(), 1));
        // u²u′ → 2u u′² + u²u″
        let p = &d(u(), 0).pow(2) * &d(u(), 1);
        let expected = (&d(u(), 0) * &d(u(), 1).pow(2)).scale_int(2) + &d(u(), 0).pow(2) * &d(u(), 2);
        assert_eq!(p.derivative(), expected);
    }

    #[test]
    fn variational_derivative_examples() {
        let u0 = d(u(), 0);
        assert_eq!(u0.pow(2).variational_derivative(u()), u0.scale_int(2));
        let half_u1_sq = d(u(), 1).pow(2).scale(&q(1, 2));
        assert_eq!(half_u1_sq.variational_derivative(u()), -d(u(), 2));
        // ∫u u″ → 2u″, same as δ/δu of −∫(u′)²
        let uu2 = &u0 * &d(u(), 2);
        assert_eq!(uu2.variational_derivative(u()), d(u(), 2).scale_int(2));
        assert_eq!(
            (-d(u(), 1).pow(2)).variational_derivative(u()),
            d(u(), 2).scale_int(2)
        );
        assert!(u0.variational_derivative(v()).is_zero());
    }

    #[test]
    fn frechet_examples() {
        let phi = Generator::plain("phi");
        let p = -d(phi, 1) - d(phi, 0).pow(2);
        let op = p.frechet_derivative(phi);
        assert_eq!(op.coeff(1), DiffPoly::integer(-1));
        assert_eq!(op.coeff(0), d(phi, 0).scale_int(-2));
        assert_eq!(op.order(), Some(1));
        let op = d(u(), 0).pow(2).frechet_derivative(u());
        assert_eq!(op.coeff(0), d(u(), 0).scale_int(2));
        assert_eq!(op.order(), Some(0));
    }

    #[test]
    fn substitution_respects_derivatives() {
        // u ↦ v², so u′ ↦ 2 v v′
        let map = BTreeMap::from([(u(), d(v(), 0).pow(2))]);
        let p = d(u(), 1) + d(v(), 0);
        let expected = (&d(v(), 0) * &d(v(), 1)).scale_int(2) + d(v(), 0);
        assert_eq!(p.substitute(&map), expected);
    }

    #[test]
    fn display_is_descending() {
        let p = d(u(), 0).pow(2) - d(u(), 1).scale(&q(3, 2)) + DiffPoly::integer(1);
        assert_eq!(p.to_string(), "u^2 - 3/2*u' + 1");
    }
}
