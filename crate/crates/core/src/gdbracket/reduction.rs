//! The `u₁ = 0` reduction. Gradients gain a first component `x₁` fixed by
//! `res[X, L] = 0`; the same structure then closes on the remaining fields.

use std::collections::BTreeMap;

use crate::diffalg::{integrate_exact, DiffPoly, LocalOperator, Rational};
use crate::error::{Error, Result};
use crate::psido::{Operator, Rule};

use super::bracket::{poisson_matrix, probe};
use super::{LaxShape, OneForm, PoissonMatrix};

/// `res[X, L]`.
pub fn constraint_residue<R: Rule>(x: &OneForm) -> Result<DiffPoly> {
    let l = x.shape().lax::<R>();
    R::bracket(&x.to_operator(), &l).residue()
}

/// The constant `c` in `res[∂^{−n} ∘ x₁, L] = c x₁′` for `L` of order `n`.
fn constraint_slope<R: Rule>(l: &Operator<R>, n: i32, floor: i32) -> Result<Rational> {
    let w = probe();
    let x = Operator::<R>::power_times(-n, &DiffPoly::gen(w), Some(floor));
    let r = R::bracket(&x, l).residue()?;
    LocalOperator::from_probe(&r, w)?
        .as_constant_derivation()
        .ok_or_else(|| Error::Inconsistent(format!("the constraint is not proportional to x1' (residue {r})")))
}

/// Solves `res[X, L] = 0` for the first component of
/// `X = ∂^{−n} x₁ + Σᵢ₌₂ ∂^{−n+i−1} xᵢ`, expanded to `floor`.
pub fn solve_first_component<R: Rule>(
    l: &Operator<R>,
    components: &BTreeMap<u32, DiffPoly>,
    floor: i32,
) -> Result<DiffPoly> {
    let n = l.order().ok_or_else(|| Error::InvalidShape("zero Lax operator".into()))?;
    let mut x = Operator::<R>::zero_to(floor);
    for (&i, c) in components.iter().filter(|(&i, _)| i >= 2) {
        x = x.add(&Operator::power_times(-n + i as i32 - 1, c, Some(floor)));
    }
    if x.is_zero() {
        return Ok(DiffPoly::zero());
    }
    let rest = R::bracket(&x, l).residue()?;
    let c = constraint_slope(l, n, floor)?;
    Ok(integrate_exact(&rest)?.scale(&-c.recip()))
}

pub(crate) fn complete_gradient<R: Rule>(components: &BTreeMap<u32, DiffPoly>, shape: &LaxShape) -> Result<OneForm> {
    let mut comps: BTreeMap<u32, DiffPoly> = components.iter().filter(|(&i, _)| i >= 2).map(|(&i, c)| (i, c.clone())).collect();
    let Some(&top) = comps.keys().next_back() else {
        return Ok(OneForm::new(shape, comps));
    };
    let floor = shape.one_form_floor(-shape.order() + top as i32 - 1);
    let x1 = solve_first_component(&shape.lax::<R>(), &comps, floor)?;
    comps.insert(1, x1);
    Ok(OneForm::new(shape, comps))
}

/// Completes the components `xᵢ` (`i ≥ 2`) of a gradient on a reduced shape
/// by solving `res[X, L] = 0` for `x₁`, with zero constant of integration.
pub fn reduced_gradient<R: Rule>(components: &BTreeMap<u32, DiffPoly>, shape: &LaxShape) -> Result<OneForm> {
    if !shape.is_reduced() {
        return Err(Error::InvalidShape("reduced_gradient needs a reduced shape".into()));
    }
    if components.contains_key(&1) {
        return Err(Error::InvalidShape("the first component is solved for, not given".into()));
    }
    complete_gradient::<R>(components, shape)
}

/// The reduced structure on slots `i, j ≥ 2`, from completed probe gradients.
///
/// Fails if the Adler map of a completed gradient has a `∂ⁿ⁻¹` component,
/// which would push `L` off the constraint surface.
pub fn reduced_matrix<R: Rule>(shape: &LaxShape) -> Result<PoissonMatrix> {
    if !shape.is_reduced() {
        return Err(Error::InvalidShape("reduced_matrix needs a reduced shape".into()));
    }
    let n = shape.order();
    let l = shape.lax::<R>();
    let w = probe();
    let mut entries = BTreeMap::new();
    for j in 2..=shape.count() {
        if !(2..=shape.count()).any(|i| shape.certified(i, j)) {
            continue;
        }
        let x = complete_gradient::<R>(&BTreeMap::from([(j, DiffPoly::gen(w))]), shape)?;
        let jx = R::adler(&l, &x.to_operator())?;
        let stray = jx.coeff(n - 1)?;
        if !stray.is_zero() {
            return Err(Error::Inconsistent(format!(
                "the Adler map leaves the constraint surface: {stray}"
            )));
        }
        for i in 2..=shape.count() {
            if shape.certified(i, j) {
                let c = jx.coeff(n - i as i32)?;
                entries.insert((i, j), LocalOperator::from_probe(&c, w)?);
            }
        }
    }
    Ok(PoissonMatrix::new(shape, entries))
}

/// Independent oracle: `D̃ᵢⱼ = Dᵢⱼ − Dᵢ₁ D₁₁⁻¹ D₁ⱼ`, with `D₁₁ = c∂` inverted
/// on each probe by exact integration.
pub fn dirac_matrix<R: Rule>(shape: &LaxShape) -> Result<PoissonMatrix> {
    if !shape.is_reduced() {
        return Err(Error::InvalidShape("dirac_matrix needs a reduced shape".into()));
    }
    let full = poisson_matrix::<R>(shape)?;
    let c = full
        .get(1, 1)
        .and_then(LocalOperator::as_constant_derivation)
        .ok_or_else(|| Error::Inconsistent("D11 is not a constant multiple of D".into()))?;
    let w = probe();
    let mut entries = BTreeMap::new();
    for (&(i, j), dij) in full.entries() {
        if i < 2 || j < 2 {
            continue;
        }
        let (Some(di1), Some(d1j)) = (full.get(i, 1), full.get(1, j)) else {
            continue;
        };
        let inner = integrate_exact(&d1j.applied_to_generator(w))?.scale(&c.recip());
        let value = dij.applied_to_generator(w) - di1.apply(&inner);
        entries.insert((i, j), LocalOperator::from_probe(&value, w)?);
    }
    Ok(PoissonMatrix::new(shape, entries))
}
