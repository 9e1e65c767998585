use std::collections::BTreeMap;

use crate::diffalg::{DiffPoly, Generator};
use crate::error::{Error, Result};
use crate::psido::{Operator, Rule};
use crate::report::Report;

use super::factor::window_text;
use super::reduction::{constraint_residue, dirac_matrix, reduced_gradient, reduced_matrix, solve_first_component};
use super::{Factor, Factorization, LaxShape, OneForm, Sampling};

/// Product check: the bracket induced on `L = AB` by `GD(A) ⊕ GD(B)` is `GD(L)`.
pub fn verify_product<R: Rule>(a: &LaxShape, b: &LaxShape, sampling: &Sampling) -> Result<Report> {
    Factorization::new(vec![Factor::direct(a.clone()), Factor::direct(b.clone())], 0)?.verify::<R>(1, sampling)
}

/// Inversion check: the bracket induced on `L = A⁻¹` by `GD(A)` is `−GD(L)`.
pub fn verify_inverse<R: Rule>(a: &LaxShape, floor: i32, sampling: &Sampling) -> Result<Report> {
    Factorization::new(vec![Factor::inverted(a.clone())], floor)?.verify::<R>(-1, sampling)
}

/// The reduced matrix against the Dirac oracle, plus the constraint on
/// completed gradients of sampled functionals.
pub fn verify_reduction<R: Rule>(shape: &LaxShape, sampling: &Sampling) -> Result<Report> {
    let mut report = Report::new(format!("u1 = 0 reduction of {shape}"), window_text(shape)).with_seed(sampling.seed);
    let reduced = reduced_matrix::<R>(shape)?;
    let dirac = dirac_matrix::<R>(shape)?;
    report.check(
        "reduced matrix = Dirac oracle",
        reduced == dirac && !reduced.entries().is_empty(),
        format!("{} entries", reduced.entries().len()),
    );
    report.check("antisymmetry", reduced.is_antisymmetric(), "");
    let fields: Vec<Generator> = shape.fields().map(|(_, g)| g).collect();
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let comps: BTreeMap<u32, DiffPoly> = shape.fields().map(|(i, _)| (i, sampler.polynomial(&fields))).collect();
        let x = reduced_gradient::<R>(&comps, shape)?;
        let r = constraint_residue::<R>(&x)?;
        report.check(format!("constraint {}", s + 1), r.is_zero(), "");
    }
    Ok(report)
}

/// Checks `res[∇̃_A F, Ã] = 0 ⇔ res[∇̃_L F, L̃] = 0` for `L̃ = Ã⁻¹`, with the
/// gradients related by `∇̃_A F = −L̃ ∇̃_L F L̃` (equivalently `∇̃_L F = −Ã ∇̃_A F Ã`).
pub fn verify_reduced_inverse<R: Rule>(a: &LaxShape, floor: i32, sampling: &Sampling) -> Result<Report> {
    if !a.is_reduced() || !a.is_differential() {
        return Err(Error::InvalidShape("expected a reduced differential shape".into()));
    }
    let n = a.order();
    let op_a = a.lax::<R>();
    if floor > -2 * n - 2 {
        return Err(Error::FloorTooHigh {
            power: -2 * n - 2,
            floor,
        });
    }
    let op_l = op_a.inverse(floor)?;
    let mut report = Report::new(format!("reduction under inversion of {a}"), format!("inverse to floor {floor}")).with_seed(sampling.seed);
    report.check("first field of the inverse vanishes", op_l.coeff(-n - 1)?.is_zero(), "");

    let fields: Vec<Generator> = a.fields().map(|(_, g)| g).collect();
    let x_floor = -2 * n - 2;
    let mut sampler = sampling.sampler().with_degree(2);
    for s in 0..sampling.samples {
        // constrained on A, mapped to L
        let comps: BTreeMap<u32, DiffPoly> = a.fields().map(|(i, _)| (i, sampler.polynomial(&fields))).collect();
        let xa = reduced_gradient::<R>(&comps, a)?.to_operator_to::<R>(x_floor);
        let ra = R::bracket(&xa, &op_a).residue()?;
        let xl = op_a.mul(&xa).mul(&op_a).neg();
        let rl = R::bracket(&xl, &op_l).residue()?;
        report.check(format!("A to L {}", s + 1), ra.is_zero() && rl.is_zero(), "");

        // constrained on L, mapped to A
        let comps: BTreeMap<u32, DiffPoly> = (2..=3).map(|i| (i, sampler.polynomial(&fields))).collect();
        let mut xl = Operator::<R>::zero();
        let y1 = solve_first_component(&op_l, &comps, x_floor)?;
        for (i, y) in comps.iter().chain([(&1, &y1)]) {
            xl = xl.add(&Operator::power_times(n + *i as i32 - 1, y, None));
        }
        let rl = R::bracket(&xl, &op_l).residue()?;
        let xa = op_l.mul(&xl).mul(&op_l).neg();
        let ra = R::bracket(&xa, &op_a).residue()?;
        report.check(format!("L to A {}", s + 1), rl.is_zero() && ra.is_zero(), "");

        // the residues agree for unconstrained gradients as well
        let comps: BTreeMap<u32, DiffPoly> = (1..=n as u32).map(|i| (i, sampler.polynomial(&fields))).collect();
        let xa = OneForm::new(a, comps).to_operator_to::<R>(x_floor);
        let xl = op_a.mul(&xa).mul(&op_a).neg();
        let same = R::bracket(&xa, &op_a).residue()? == R::bracket(&xl, &op_l).residue()?;
        report.check(format!("residues agree {}", s + 1), same, "");
    }
    Ok(report)
}
