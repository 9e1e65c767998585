use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diffalg::{DiffPoly, Functional, Generator, LocalOperator, Rational};
use crate::error::{Error, Result};

/// How `∂ᵏ` moves past a coefficient, plus the Adler map built on that product.
pub trait Rule: Copy + Default + Eq + Hash + fmt::Debug + 'static {
    /// Name of the generator in printed form (`D` or `Xi`).
    const SYMBOL: &'static str;

    /// Coefficient of `f⁽ʲ⁾ ∂ᵏ⁻ʲ` in `∂ᵏ ∘ f`.
    fn leibniz(k: i32, j: u32) -> BigInt;

    /// Largest `j` with a nonzero Leibniz coefficient, `None` if unbounded.
    fn max_shift(k: i32) -> Option<u32>;

    fn adler(l: &Operator<Self>, x: &Operator<Self>) -> Result<Operator<Self>>;

    /// The Lie bracket whose residue pairs gradients with the operator: the
    /// commutator, or its classical limit.
    fn bracket(a: &Operator<Self>, b: &Operator<Self>) -> Operator<Self>;
}

/// A Laurent series `Σ cₖ ∂ᵏ` certified down to an optional floor.
///
/// `floor == None` means the operator is exact; exact operators have no
/// negative powers, so any operator with a tail carries a floor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Operator<R> {
    coeffs: BTreeMap<i32, DiffPoly>,
    floor: Option<i32>,
    rule: PhantomData<R>,
}

impl<R: Rule> Default for Operator<R> {
    fn default() -> Self {
        Operator {
            coeffs: BTreeMap::new(),
            floor: None,
            rule: PhantomData,
        }
    }
}

fn max_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    }
}

impl<R: Rule> Operator<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The zero operator, certified only at powers `≥ floor`.
    pub fn zero_to(floor: i32) -> Self {
        Operator {
            floor: Some(floor),
            ..Self::default()
        }
    }

    pub fn one() -> Self {
        Self::constant(DiffPoly::one())
    }

    /// Multiplication by `c`.
    pub fn constant(c: DiffPoly) -> Self {
        Self::monomial(c, 0, None)
    }

    /// The generator `∂ᵏ` (or `ξᵏ`).
    pub fn power(k: i32, floor: Option<i32>) -> Self {
        Self::monomial(DiffPoly::one(), k, floor)
    }

    /// `c ∂ᵏ`. Panics if `k < 0` and no floor is given.
    pub fn monomial(c: DiffPoly, k: i32, floor: Option<i32>) -> Self {
        Self::from_coeffs([(k, c)], floor)
    }

    /// Coefficients below `floor` are dropped. Panics if `floor` is `None`
    /// and a negative power is present.
    pub fn from_coeffs<I: IntoIterator<Item = (i32, DiffPoly)>>(coeffs: I, floor: Option<i32>) -> Self {
        let mut op = Operator {
            floor,
            ..Self::default()
        };
        for (k, c) in coeffs {
            if floor.is_some_and(|f| k < f) {
                continue;
            }
            assert!(
                k >= 0 || floor.is_some(),
                "an operator with negative powers needs a truncation floor"
            );
            op.add_coeff(k, c);
        }
        op
    }

    pub fn differential<I: IntoIterator<Item = (u32, DiffPoly)>>(coeffs: I) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(|(k, c)| (k as i32, c)), None)
    }

    pub fn from_local(op: &LocalOperator) -> Self {
        Self::differential(op.coeffs().map(|(k, c)| (k, c.clone())))
    }

    /// The operator as a [`LocalOperator`], if it is exact and differential.
    pub fn to_local(&self) -> Option<LocalOperator> {
        if self.floor.is_some_and(|f| f > 0) || !self.is_differential() {
            return None;
        }
        Some(LocalOperator::from_coeffs(
            self.coeffs.iter().map(|(&k, c)| (k as u32, c.clone())),
        ))
    }

    fn add_coeff(&mut self, k: i32, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Lowest certified power, `None` when exact.
    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Highest power with a nonzero coefficient.
    pub fn order(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(i32, &DiffPoly)> {
        self.coeffs.iter().next_back().map(|(&k, c)| (k, c))
    }

    /// True if every certified coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_differential(&self) -> bool {
        self.coeffs.keys().all(|&k| k >= 0)
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (i32, &DiffPoly)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    /// The coefficient of `∂ᵏ`, or [`Error::FloorTooHigh`] if it is not certified.
    pub fn coeff(&self, k: i32) -> Result<DiffPoly> {
        match self.floor {
            Some(f) if k < f => Err(Error::FloorTooHigh { power: k, floor: f }),
            _ => Ok(self.coeffs.get(&k).cloned().unwrap_or_default()),
        }
    }

    /// Forgets everything below `floor` (never lowers the current floor).
    pub fn truncated(&self, floor: i32) -> Self {
        let floor = max_floor(self.floor, Some(floor));
        Self::from_coeffs(self.coeffs.iter().map(|(&k, c)| (k, c.clone())), floor)
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = max_floor(self.floor, other.floor);
        let mut out = self.truncated_or_clone(floor);
        for (&k, c) in &other.coeffs {
            if floor.is_some_and(|f| k < f) {
                continue;
            }
            out.add_coeff(k, c.clone());
        }
        out
    }

    fn truncated_or_clone(&self, floor: Option<i32>) -> Self {
        match floor {
            Some(f) => self.truncated(f),
            None => self.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies every coefficient on the left by `c`.
    pub fn left_mul(&self, c: &DiffPoly) -> Self {
        self.map_coeffs(|p| c * p)
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, c)| (k, f(c))), self.floor)
    }

    pub fn substitute(&self, map: &BTreeMap<Generator, DiffPoly>) -> Self {
        self.map_coeffs(|c| c.substitute(map))
    }

    /// Effective order used for floor propagation: the zero operator with a
    /// floor `f` counts as having order `f − 1`.
    fn top(&self) -> Option<i32> {
        self.order().or_else(|| self.floor.map(|f| f - 1))
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.is_exact()
    }

    fn product_floor(&self, other: &Self) -> Option<i32> {
        let (ea, eb) = (self.top().unwrap(), other.top().unwrap());
        match (self.floor, other.floor) {
            (None, None) => None,
            (Some(fa), None) => Some(fa + eb),
            (None, Some(fb)) => Some(ea + fb),
            (Some(fa), Some(fb)) => Some((fa + eb).max(ea + fb)),
        }
    }

    fn shift_bound(k: i32, m: i32, floor: Option<i32>) -> Option<u32> {
        let by_floor = match floor {
            Some(f) if k + m < f => return None,
            Some(f) => Some((k + m - f) as u32),
            None => None,
        };
        match (R::max_shift(k), by_floor) {
            (Some(r), Some(f)) => Some(r.min(f)),
            (Some(r), None) => Some(r),
            (None, Some(f)) => Some(f),
            (None, None) => unreachable!("negative powers always carry a floor"),
        }
    }

    /// The product, certified down to the floor implied by both factors.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let floor = self.product_floor(other);
        let mut out = Operator {
            floor,
            ..Self::default()
        };
        for (&m, b) in &other.coeffs {
            let need = self
                .coeffs
                .keys()
                .filter_map(|&k| Self::shift_bound(k, m, floor))
                .max();
            let Some(need) = need else { continue };
            let jets = b.derivatives_up_to(need);
            for (&k, a) in &self.coeffs {
                let Some(top) = Self::shift_bound(k, m, floor) else {
                    continue;
                };
                for j in 0..=top {
                    let db = &jets[j as usize];
                    if db.is_zero() {
                        break;
                    }
                    let c = R::leibniz(k, j);
                    if c.is_zero() {
                        continue;
                    }
                    out.add_coeff(k + m - j as i32, (a * db).scale(&Rational::from_integer(c)));
                }
            }
        }
        out
    }

    pub fn pow(&self, p: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Projection onto nonnegative powers; fails if `∂⁰` is not certified.
    pub fn plus_part(&self) -> Result<Self> {
        if let Some(f) = self.floor.filter(|&f| f > 0) {
            return Err(Error::FloorTooHigh { power: 0, floor: f });
        }
        Ok(Self::from_coeffs(
            self.coeffs.range(0..).map(|(&k, c)| (k, c.clone())),
            None,
        ))
    }

    /// Projection onto negative powers, keeping the floor.
    pub fn minus_part(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.range(..0).map(|(&k, c)| (k, c.clone())),
            self.floor,
        )
    }

    /// Coefficient of `∂⁻¹`.
    pub fn residue(&self) -> Result<DiffPoly> {
        self.coeff(-1)
    }

    /// `Tr A = ∫ res A`.
    pub fn trace(&self) -> Result<Functional> {
        Ok(Functional::new(self.residue()?))
    }

    /// Two-sided inverse of a monic operator, down to `floor`.
    ///
    /// If `A` has order `n` and floor `f`, the inverse is certified only down
    /// to `f − 2n`; asking for more is an error.
    pub fn inverse(&self, floor: i32) -> Result<Self> {
        let Some((n, lead)) = self.leading() else {
            return Err(Error::NotMonic {
                leading: "0".into(),
            });
        };
        if !lead.is_one() {
            return Err(Error::NotMonic {
                leading: lead.to_string(),
            });
        }
        if let Some(f) = self.floor {
            if floor < f - 2 * n {
                return Err(Error::FloorTooHigh {
                    power: floor,
                    floor: f - 2 * n,
                });
            }
        }
        // B = Σ bₛ ∂^{−n−s}; the ∂^{−s} coefficient of A·B fixes bₛ.
        let depth = (-n - floor).max(-1);
        let mut b: Vec<DiffPoly> = Vec::new();
        let mut jets: Vec<Vec<DiffPoly>> = Vec::new();
        for s in 0..=depth {
            let bs = if s == 0 {
                DiffPoly::one()
            } else {
                let mut acc = DiffPoly::zero();
                for (&k, a) in &self.coeffs {
                    for t in 0..s {
                        let j = k - n - t + s;
                        if j < 0 {
                            continue;
                        }
                        let c = R::leibniz(k, j as u32);
                        if c.is_zero() {
                            continue;
                        }
                        let dbt = &jets[t as usize][j as usize];
                        if dbt.is_zero() {
                            continue;
                        }
                        acc += (a * dbt).scale(&Rational::from_integer(c));
                    }
                }
                -acc
            };
            jets.push(bs.derivatives_up_to((depth - s) as u32));
            b.push(bs);
        }
        let coeffs = b.into_iter().enumerate().map(|(s, c)| (-n - s as i32, c));
        Ok(Self::from_coeffs(coeffs, Some(floor)))
    }

    /// Lowest power at which both operators are certified.
    pub fn common_floor(&self, other: &Self) -> Option<i32> {
        max_floor(self.floor, other.floor)
    }

    /// Equality on the intersection of the two certified windows.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let f = self.common_floor(other);
        let keep = |k: i32| f.is_none_or(|f| k >= f);
        let a = self.coeffs.iter().filter(|(&k, _)| keep(k));
        let b = other.coeffs.iter().filter(|(&k, _)| keep(k));
        a.eq(b)
    }

    /// `∂ᵏ ∘ c` as an operator expanded down to `floor`.
    pub fn power_times(k: i32, c: &DiffPoly, floor: Option<i32>) -> Self {
        Self::power(k, floor).mul(&Self::constant(c.clone()))
    }
}

impl<R: Rule> fmt::Display for Operator<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let sym = R::SYMBOL;
        for (i, (&k, c)) in self.coeffs.iter().rev().enumerate() {
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if c.len() == 1 || k == 0 => (true, rest),
                _ => (false, text.as_str()),
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let power = match k {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{k}"),
            };
            if k == 0 {
                f.write_str(body)?;
            } else if body == "1" {
                f.write_str(&power)?;
            } else if c.len() == 1 {
                write!(f, "{body}*{power}")?;
            } else {
                write!(f, "({body})*{power}")?;
            }
        }
        Ok(())
    }
}

impl<R: Rule> fmt::Debug for Operator<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.floor {
            Some(fl) => write!(f, "{self} [floor {fl}]"),
            None => write!(f, "{self} [exact]"),
        }
    }
}
