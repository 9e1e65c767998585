//! Brackets induced on `L = A₁^{±1} A₂^{±1} ⋯` from brackets on the factors.

use std::collections::{BTreeMap, BTreeSet};

use crate::diffalg::{int, DiffPoly, Functional, Generator, LocalOperator};
use crate::error::{Error, Result};
use crate::psido::{Operator, Rule};
use crate::report::Report;

use super::bracket::{gd_bracket, poisson_matrix};
use super::{LaxShape, PoissonMatrix, Sampling};

/// `(B ∘ ∇_L F, ∇_L F ∘ A)`: the gradients with respect to `A` and `B` of a
/// functional of `L = AB`.
pub fn grad_under_product<R: Rule>(
    grad: &Operator<R>,
    a: &Operator<R>,
    b: &Operator<R>,
) -> (Operator<R>, Operator<R>) {
    (b.mul(grad), grad.mul(a))
}

/// `−L ∘ ∇_L F ∘ L`: the gradient with respect to `A` of a functional of `L = A⁻¹`.
pub fn grad_under_inverse<R: Rule>(grad: &Operator<R>, l: &Operator<R>) -> Operator<R> {
    l.mul(grad).mul(l).neg()
}

/// One factor of a factorised Lax operator, carrying `sign` times its own
/// second bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub shape: LaxShape,
    pub inverted: bool,
    pub sign: i64,
}

impl Factor {
    pub fn direct(shape: LaxShape) -> Self {
        Factor {
            shape,
            inverted: false,
            sign: 1,
        }
    }

    pub fn inverted(shape: LaxShape) -> Self {
        Factor {
            shape,
            inverted: true,
            sign: 1,
        }
    }

    pub fn with_sign(mut self, sign: i64) -> Self {
        self.sign = sign;
        self
    }
}

/// `L = ∏ Aₜ^{±1}` with differential factors in disjoint fields.
#[derive(Clone, Debug)]
pub struct Factorization {
    factors: Vec<Factor>,
    floor: i32,
    family: String,
}

impl Factorization {
    /// `floor` is the truncation of `L` when some factor is inverted; it is
    /// ignored otherwise.
    pub fn new(factors: Vec<Factor>, floor: i32) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidShape("no factors".into()));
        }
        let mut seen = BTreeSet::new();
        for f in &factors {
            if !f.shape.is_differential() || f.shape.is_reduced() {
                return Err(Error::InvalidShape(format!("factor {} must be a full differential shape", f.shape)));
            }
            for g in f.shape.generators() {
                if !seen.insert(g) {
                    return Err(Error::InvalidShape(format!("field {g} is shared between factors")));
                }
            }
        }
        let out = Factorization {
            factors,
            floor,
            family: "u".into(),
        };
        if out.order() == 0 {
            return Err(Error::InvalidShape("order-0 products are not supported".into()));
        }
        out.check_family()?;
        Ok(out)
    }

    /// Names the fields of the product `family1, family2, …` (default `u`).
    pub fn with_family(mut self, family: &str) -> Result<Self> {
        Generator::try_new(family, Some(1))?;
        self.family = family.into();
        self.check_family()?;
        Ok(self)
    }

    fn check_family(&self) -> Result<()> {
        let clash = self
            .factors
            .iter()
            .flat_map(|f| f.shape.generators())
            .find(|g| g.name() == self.family);
        match clash {
            Some(g) => Err(Error::InvalidShape(format!(
                "factor field {g} clashes with the product family {}",
                self.family
            ))),
            None => Ok(()),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn order(&self) -> i32 {
        self.factors
            .iter()
            .map(|f| if f.inverted { -f.shape.order() } else { f.shape.order() })
            .sum()
    }

    fn has_tail(&self) -> bool {
        self.factors.iter().any(|f| f.inverted)
    }

    /// The truncation of `L`, `None` if it is differential.
    pub fn floor(&self) -> Option<i32> {
        self.has_tail().then_some(self.floor)
    }

    /// The expanded product, certified to [`Self::floor`].
    pub fn expand<R: Rule>(&self) -> Result<Operator<R>> {
        let total = self.order();
        let mut acc = Operator::<R>::one();
        for f in &self.factors {
            let lax = f.shape.lax::<R>();
            let op = if f.inverted {
                let own = -f.shape.order();
                lax.inverse(self.floor - (total - own))?
            } else {
                lax
            };
            acc = acc.mul(&op);
        }
        match self.floor() {
            None => Ok(acc),
            Some(t) => {
                if acc.floor().is_some_and(|f| f > t) {
                    return Err(Error::FloorTooHigh {
                        power: t,
                        floor: acc.floor().unwrap(),
                    });
                }
                Ok(acc.truncated(t))
            }
        }
    }

    /// The shape of `L` and the embedding `uₖ ↦ uₖ(factor fields)`.
    pub fn target<R: Rule>(&self) -> Result<(LaxShape, BTreeMap<Generator, DiffPoly>)> {
        let l = self.expand::<R>()?;
        let n = self.order();
        let shape = match self.floor() {
            None => LaxShape::kdv(n, &self.family)?,
            Some(t) => LaxShape::kp(n, t, &self.family)?,
        };
        let mut images = BTreeMap::new();
        for (k, u) in shape.fields() {
            images.insert(u, l.coeff(n - k as i32)?);
        }
        Ok((shape, images))
    }

    /// `Σₜ signₜ {F, G}_{Aₜ}`, each factor's bracket seeing the other
    /// factors' fields as constants.
    pub fn base_bracket<R: Rule>(&self, f: &Functional, g: &Functional) -> Result<Functional> {
        let mut total = Functional::zero();
        for fac in &self.factors {
            let b = gd_bracket::<R>(f, g, &fac.shape)?;
            total = total.add(&b.scale(&int(fac.sign)));
        }
        Ok(total)
    }

    /// Block-diagonal structure on the factor fields.
    pub fn base_matrix<R: Rule>(&self) -> Result<BTreeMap<(Generator, Generator), LocalOperator>> {
        let mut out = BTreeMap::new();
        for fac in &self.factors {
            let m = poisson_matrix::<R>(&fac.shape)?;
            for (k, d) in m.by_generator() {
                out.insert(k, d.scale(&int(fac.sign)));
            }
        }
        // distinct factors commute
        let all: Vec<Generator> = self.factors.iter().flat_map(|f| f.shape.generators()).collect();
        for &a in &all {
            for &b in &all {
                out.entry((a, b)).or_insert_with(LocalOperator::zero);
            }
        }
        Ok(out)
    }

    /// `D^ind_kl = Σ F_kα ∘ D_αβ ∘ F_lβ†` with `F_kα` the Fréchet derivative of
    /// `u_k` along the factor field `α`.
    pub fn induced_matrix<R: Rule>(&self) -> Result<PoissonMatrix> {
        let (shape, images) = self.target::<R>()?;
        let base = self.base_matrix::<R>()?;
        induce(&shape, &images, &base)
    }

    /// Compares the induced and direct structures on `L`, expecting
    /// `induced = expected · direct`, at matrix level and on `samples` seeded
    /// functional pairs.
    pub fn verify<R: Rule>(&self, expected: i64, sampling: &Sampling) -> Result<Report> {
        let (shape, images) = self.target::<R>()?;
        let mut report = Report::new(format!("{shape} as {}", self.describe()), window_text(&shape)).with_seed(sampling.seed);
        let factor = int(expected);

        let gd = poisson_matrix::<R>(&shape)?;
        let direct = gd.substitute(&images);
        let induced = induce(&shape, &images, &self.base_matrix::<R>()?)?;
        let mismatched: Vec<String> = direct
            .entries()
            .iter()
            .filter(|(k, d)| induced.get(k.0, k.1) != Some(&d.scale(&factor)))
            .map(|(k, _)| format!("({}, {})", k.0, k.1))
            .collect();
        report.check(
            "matrix",
            mismatched.is_empty() && !direct.entries().is_empty(),
            if mismatched.is_empty() {
                format!("{} certified entries agree", direct.entries().len())
            } else {
                format!("entries {} differ", mismatched.join(" "))
            },
        );
        report.check("induced antisymmetry", induced.is_antisymmetric(), "");

        let depth = shape.certified_depth();
        let fields: Vec<Generator> = shape.fields().filter(|(i, _)| *i <= depth).map(|(_, g)| g).collect();
        let mut sampler = sampling.sampler();
        for s in 0..sampling.samples {
            let f = sampler.functional(&fields);
            let g = sampler.functional(&fields);
            let lhs = gd.contract_at(&f, &g, &images)?;
            let rhs = self.base_bracket::<R>(&f.substitute(&images), &g.substitute(&images))?;
            let ok = rhs == lhs.scale(&factor);
            report.check(
                format!("pair {}", s + 1),
                ok,
                if ok {
                    String::new()
                } else {
                    format!("F = {f}, G = {g}")
                },
            );
        }
        Ok(report)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                let sign = if f.sign < 0 { "-" } else { "+" };
                let inv = if f.inverted { "^-1" } else { "" };
                format!("({}){inv} {sign}GD", f.shape)
            })
            .collect();
        parts.join(" * ")
    }
}

/// One-line description of the certified window of `shape`.
pub fn window_text(shape: &LaxShape) -> String {
    match shape.floor() {
        None => "exact (differential)".into(),
        Some(f) => format!(
            "floor {f}: {} fields, brackets certified for i + j <= {}",
            shape.count(),
            shape.count() + 1
        ),
    }
}

/// Pushes `base` through the embedding onto the certified pairs of `shape`.
///
/// Every pair of fields reached by two Fréchet derivatives must have an
/// entry in `base`; a missing one means the base structure is not certified
/// far enough and is reported as [`Error::OutOfWindow`].
pub fn induce(
    shape: &LaxShape,
    images: &BTreeMap<Generator, DiffPoly>,
    base: &BTreeMap<(Generator, Generator), LocalOperator>,
) -> Result<PoissonMatrix> {
    let fields: BTreeSet<Generator> = base.keys().flat_map(|(a, b)| [*a, *b]).collect();
    let mut frechet: BTreeMap<(u32, Generator), LocalOperator> = BTreeMap::new();
    for (k, u) in shape.fields() {
        for &a in &fields {
            let f = images[&u].frechet_derivative(a);
            if !f.is_zero() {
                frechet.insert((k, a), f);
            }
        }
    }
    let adjoints: BTreeMap<(u32, Generator), LocalOperator> =
        frechet.iter().map(|(k, f)| (*k, f.adjoint())).collect();
    let mut entries = BTreeMap::new();
    for (k, _) in shape.fields() {
        for (l, _) in shape.fields() {
            if !shape.certified(k, l) {
                continue;
            }
            let mut total = LocalOperator::zero();
            for (&(_, a), fk) in frechet.iter().filter(|((kk, _), _)| *kk == k) {
                for (&(_, b), fl) in adjoints.iter().filter(|((ll, _), _)| *ll == l) {
                    let d = base.get(&(a, b)).ok_or_else(|| Error::OutOfWindow {
                        field: format!("{{{a}, {b}}}"),
                    })?;
                    if !d.is_zero() {
                        total = total.add(&fk.compose(d).compose(fl));
                    }
                }
            }
            entries.insert((k, l), total);
        }
    }
    Ok(PoissonMatrix::new(shape, entries))
}
