use std::collections::BTreeMap;
use std::fmt;

use crate::diffalg::{DiffPoly, Functional, Generator, LocalOperator};
use crate::error::{Error, Result};
use crate::psido::{Operator, Rule};

use super::reduction::complete_gradient;
use super::LaxShape;

/// The probe field used to read off Poisson operators.
pub(crate) fn probe() -> Generator {
    Generator::plain("_w")
}

/// A gradient `X = Σᵢ ∂^{−n+i−1} ∘ xᵢ` dual to deformations of `L`.
#[derive(Clone, PartialEq, Eq)]
pub struct OneForm {
    components: BTreeMap<u32, DiffPoly>,
    shape: LaxShape,
}

impl OneForm {
    pub fn new(shape: &LaxShape, components: BTreeMap<u32, DiffPoly>) -> Self {
        let components = components.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        OneForm {
            components,
            shape: shape.clone(),
        }
    }

    pub fn component(&self, i: u32) -> DiffPoly {
        self.components.get(&i).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> &BTreeMap<u32, DiffPoly> {
        &self.components
    }

    pub fn shape(&self) -> &LaxShape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn top_power(&self) -> i32 {
        let n = self.shape.order();
        let last = self.components.keys().next_back().copied().unwrap_or(1);
        -n + last as i32 - 1
    }

    /// Assembles the operator, expanded far enough for the Adler map and the
    /// trace pairing.
    pub fn to_operator<R: Rule>(&self) -> Operator<R> {
        let floor = self.shape.one_form_floor(self.top_power());
        self.to_operator_to(floor)
    }

    pub fn to_operator_to<R: Rule>(&self, floor: i32) -> Operator<R> {
        let n = self.shape.order();
        let mut x = Operator::zero_to(floor);
        for (&i, c) in &self.components {
            x = x.add(&Operator::power_times(-n + i as i32 - 1, c, Some(floor)));
        }
        x
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.components.iter()).finish()
    }
}

/// Variational derivatives of `F` in each field slot.
pub fn gradient_form(f: &Functional, shape: &LaxShape) -> Result<OneForm> {
    shape.check_window(&f.generators())?;
    let components = shape
        .fields()
        .map(|(i, g)| (i, f.variational_derivative(g)))
        .collect();
    Ok(OneForm::new(shape, components))
}

/// The gradient actually paired with the Adler map: plain for full shapes,
/// completed by the constraint for reduced ones.
pub(crate) fn pairing_gradient<R: Rule>(f: &Functional, shape: &LaxShape) -> Result<OneForm> {
    let grad = gradient_form(f, shape)?;
    if shape.is_reduced() {
        complete_gradient::<R>(grad.components(), shape)
    } else {
        Ok(grad)
    }
}

/// `{F, G} = Tr(∇F · J_L(∇G))`.
pub fn gd_bracket<R: Rule>(f: &Functional, g: &Functional, shape: &LaxShape) -> Result<Functional> {
    let xf = pairing_gradient::<R>(f, shape)?;
    let xg = pairing_gradient::<R>(g, shape)?;
    if xf.is_zero() || xg.is_zero() {
        return Ok(Functional::zero());
    }
    let l = shape.lax::<R>();
    let j = R::adler(&l, &xg.to_operator())?;
    xf.to_operator().mul(&j).trace()
}

/// Operators `Dᵢⱼ` with `{uᵢ(x), uⱼ(y)} = Dᵢⱼ(∂ₓ) δ(x − y)`, indexed by slot.
#[derive(Clone, PartialEq, Eq)]
pub struct PoissonMatrix {
    shape: LaxShape,
    entries: BTreeMap<(u32, u32), LocalOperator>,
}

impl PoissonMatrix {
    pub fn new(shape: &LaxShape, entries: BTreeMap<(u32, u32), LocalOperator>) -> Self {
        PoissonMatrix {
            shape: shape.clone(),
            entries,
        }
    }

    pub fn shape(&self) -> &LaxShape {
        &self.shape
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&LocalOperator> {
        self.entries.get(&(i, j))
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), LocalOperator> {
        &self.entries
    }

    /// `Dᵢⱼ† + Dⱼᵢ = 0` for every stored pair.
    pub fn is_antisymmetric(&self) -> bool {
        self.entries.iter().all(|(&(i, j), d)| match self.entries.get(&(j, i)) {
            Some(e) => d.adjoint().add(e).is_zero(),
            None => true,
        })
    }

    pub fn substitute(&self, map: &BTreeMap<Generator, DiffPoly>) -> PoissonMatrix {
        PoissonMatrix {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|(&k, d)| (k, d.substitute(map))).collect(),
        }
    }

    /// Entries keyed by the fields in their slots; empty slots are dropped.
    pub fn by_generator(&self) -> BTreeMap<(Generator, Generator), LocalOperator> {
        self.entries
            .iter()
            .filter_map(|(&(i, j), d)| Some(((self.shape.field(i)?, self.shape.field(j)?), d.clone())))
            .collect()
    }

    /// `∫ Σᵢⱼ (δF/δuᵢ) Dᵢⱼ(δG/δuⱼ)`.
    pub fn contract(&self, f: &Functional, g: &Functional) -> Result<Functional> {
        self.shape.check_window(&f.generators())?;
        self.shape.check_window(&g.generators())?;
        let mut total = DiffPoly::zero();
        for (i, ui) in self.shape.fields() {
            let df = f.variational_derivative(ui);
            if df.is_zero() {
                continue;
            }
            for (j, uj) in self.shape.fields() {
                let dg = g.variational_derivative(uj);
                if dg.is_zero() {
                    continue;
                }
                let d = self.get(i, j).ok_or_else(|| Error::OutOfWindow {
                    field: format!("{{{ui}, {uj}}}"),
                })?;
                total += &df * &d.apply(&dg);
            }
        }
        Ok(Functional::new(total))
    }

    /// `{F, G}` pulled back along `uᵢ ↦ images`: the contraction with every
    /// piece substituted before multiplying out, which keeps the polynomials
    /// far smaller than substituting the finished bracket.
    pub fn contract_at(&self, f: &Functional, g: &Functional, images: &BTreeMap<Generator, DiffPoly>) -> Result<Functional> {
        self.shape.check_window(&f.generators())?;
        self.shape.check_window(&g.generators())?;
        let grads = |h: &Functional| -> BTreeMap<u32, DiffPoly> {
            self.shape
                .fields()
                .map(|(i, u)| (i, h.variational_derivative(u).substitute(images)))
                .filter(|(_, d)| !d.is_zero())
                .collect()
        };
        let (df, dg) = (grads(f), grads(g));
        let mut total = DiffPoly::zero();
        for (&i, a) in &df {
            for (&j, b) in &dg {
                let d = self.get(i, j).ok_or_else(|| Error::OutOfWindow {
                    field: format!("{{slot {i}, slot {j}}}"),
                })?;
                total += a * &d.substitute(images).apply(b);
            }
        }
        Ok(Functional::new(total))
    }
}

impl fmt::Display for PoissonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |i: u32| match self.shape.field(i) {
            Some(g) => g.to_string(),
            None => format!("slot{i}"),
        };
        for (&(i, j), d) in &self.entries {
            writeln!(f, "{{{}, {}}} = {}", name(i), name(j), d)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PoissonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Reads `Dᵢⱼ` from the `∂ⁿ⁻ⁱ` coefficient of `J_L(∂^{−n+j−1} ∘ w)` for a
/// fresh probe `w`. Only certified pairs are returned; empty slots are
/// probed too, with their field held at zero.
pub fn poisson_matrix<R: Rule>(shape: &LaxShape) -> Result<PoissonMatrix> {
    let n = shape.order();
    let l = shape.lax::<R>();
    let w = probe();
    let mut entries = BTreeMap::new();
    for j in 1..=shape.count() {
        if !(1..=shape.count()).any(|i| shape.certified(i, j)) {
            continue;
        }
        let top = -n + j as i32 - 1;
        let x = Operator::power_times(top, &DiffPoly::gen(w), Some(shape.one_form_floor(top)));
        let jx = R::adler(&l, &x)?;
        for i in 1..=shape.count() {
            if !shape.certified(i, j) {
                continue;
            }
            let c = jx.coeff(n - i as i32)?;
            entries.insert((i, j), LocalOperator::from_probe(&c, w)?);
        }
    }
    Ok(PoissonMatrix::new(shape, entries))
}
