//! Structural checks of the bracket on sampled data.

use std::collections::BTreeMap;

use crate::diffalg::{DiffPoly, Generator};
use crate::error::Result;
use crate::psido::{Operator, Rule};
use crate::report::Report;

use super::bracket::{gd_bracket, poisson_matrix};
use super::factor::window_text;
use super::{LaxShape, OneForm, Sampling};

fn sample_fields(shape: &LaxShape) -> Vec<Generator> {
    let depth = shape.certified_depth();
    shape.fields().filter(|(i, _)| *i <= depth).map(|(_, g)| g).collect()
}

/// `{F, G} + {G, F} = 0` on sampled pairs.
pub fn check_antisymmetry<R: Rule>(shape: &LaxShape, sampling: &Sampling) -> Result<Report> {
    let mut report = Report::new(format!("antisymmetry on {shape}"), window_text(shape)).with_seed(sampling.seed);
    let fields = sample_fields(shape);
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let f = sampler.functional(&fields);
        let g = sampler.functional(&fields);
        let sum = gd_bracket::<R>(&f, &g, shape)?.add(&gd_bracket::<R>(&g, &f, shape)?);
        report.check(format!("pair {}", s + 1), sum.is_zero(), if sum.is_zero() { String::new() } else { format!("sum {sum}") });
    }
    Ok(report)
}

/// `{F, {G, H}} + {G, {H, F}} + {H, {F, G}} = 0` on sampled triples.
pub fn check_jacobi<R: Rule>(shape: &LaxShape, sampling: &Sampling) -> Result<Report> {
    let mut report = Report::new(format!("Jacobi identity on {shape}"), window_text(shape)).with_seed(sampling.seed);
    let fields = sample_fields(shape);
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let f = sampler.functional(&fields);
        let g = sampler.functional(&fields);
        let h = sampler.functional(&fields);
        let mut total = gd_bracket::<R>(&f, &gd_bracket::<R>(&g, &h, shape)?, shape)?;
        total = total.add(&gd_bracket::<R>(&g, &gd_bracket::<R>(&h, &f, shape)?, shape)?);
        total = total.add(&gd_bracket::<R>(&h, &gd_bracket::<R>(&f, &g, shape)?, shape)?);
        report.check(format!("triple {}", s + 1), total.is_zero(), if total.is_zero() { String::new() } else { format!("cyclic sum {total}") });
    }
    Ok(report)
}

/// The Adler map of sampled one-forms has no power `≥ n`, and is
/// differential of order `≤ n − 1` on differential shapes.
pub fn check_adler_shape<R: Rule>(shape: &LaxShape, sampling: &Sampling) -> Result<Report> {
    let mut report = Report::new(format!("Adler map shape on {shape}"), window_text(shape)).with_seed(sampling.seed);
    let n = shape.order();
    let l = shape.lax::<R>();
    let fields: Vec<Generator> = shape.generators().into_iter().collect();
    let probes: Vec<Generator> = (1..=shape.certified_depth()).map(|i| Generator::indexed("x", i)).collect();
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        // probe components mix inert test functions with the fields
        let mut components = BTreeMap::new();
        for (i, x) in probes.iter().enumerate() {
            let coeff = sampler.polynomial(&fields);
            components.insert(i as u32 + 1, &DiffPoly::gen(*x) * &(coeff + DiffPoly::one()));
        }
        let form = OneForm::new(shape, components);
        let j = R::adler(&l, &form.to_operator())?;
        let top_ok = j.order().is_none_or(|k| k < n);
        let ok = if shape.is_differential() {
            top_ok && j.is_exact() && j.is_differential()
        } else {
            top_ok
        };
        report.check(format!("probe {}", s + 1), ok, format!("order {:?}", j.order()));
    }
    Ok(report)
}

/// `{F, G}` through the Adler map equals the contraction with the matrix.
pub fn check_coherence<R: Rule>(shape: &LaxShape, sampling: &Sampling) -> Result<Report> {
    let mut report = Report::new(format!("bracket/matrix coherence on {shape}"), window_text(shape)).with_seed(sampling.seed);
    let m = poisson_matrix::<R>(shape)?;
    report.check("matrix antisymmetry", m.is_antisymmetric(), "");
    let fields = sample_fields(shape);
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let f = sampler.functional(&fields);
        let g = sampler.functional(&fields);
        let ok = gd_bracket::<R>(&f, &g, shape)? == m.contract(&f, &g)?;
        report.check(format!("pair {}", s + 1), ok, "");
    }
    Ok(report)
}

/// `Tr(AB) = Tr(BA)` for sampled operators with tails.
pub fn check_trace_cyclicity<R: Rule>(fields: &[Generator], sampling: &Sampling) -> Result<Report> {
    let mut report = Report::new("trace cyclicity", "floor -4 on each factor").with_seed(sampling.seed);
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let mut ops = Vec::new();
        for top in [2, 1] {
            let coeffs: Vec<(i32, DiffPoly)> = (-4..=top).map(|k| (k, sampler.polynomial(fields))).collect();
            ops.push(Operator::<R>::from_coeffs(coeffs, Some(-4)));
        }
        let ab = ops[0].mul(&ops[1]).trace()?;
        let ba = ops[1].mul(&ops[0]).trace()?;
        report.check(format!("pair {}", s + 1), ab == ba, "");
    }
    Ok(report)
}
