use std::collections::BTreeMap;

use crate::diffalg::{int, DiffPoly, Generator, Rational};
use crate::error::{Error, Result};
use crate::gdbracket::{gd_bracket, induce, poisson_matrix, LaxShape, Sampling};
use crate::report::Report;

use super::Classical;

/// The shape of `L̂ᵖ` with fields `w₁, w₂, …` and the embedding `wⱼ(uᵢ)`.
pub fn power_images(shape: &LaxShape, p: u32) -> Result<(LaxShape, BTreeMap<Generator, DiffPoly>)> {
    if p == 0 {
        return Err(Error::InvalidShape("the power must be at least 1".into()));
    }
    if shape.is_reduced() {
        return Err(Error::InvalidShape("power maps act on full shapes".into()));
    }
    let lp = shape.lax::<Classical>().pow(p);
    let n = shape.order() * p as i32;
    let target = match lp.floor() {
        None => LaxShape::kdv(n, "w")?,
        Some(f) => LaxShape::kp(n, f, "w")?,
    };
    if shape.generators().iter().any(|g| g.name() == "w") {
        return Err(Error::InvalidShape("the field family w is reserved for the power".into()));
    }
    let mut images = BTreeMap::new();
    for (j, w) in target.fields() {
        images.insert(w, lp.coeff(n - j as i32)?);
    }
    Ok((target, images))
}

/// Compares the bracket induced on the fields of `L̂ᵖ` by the classical
/// bracket at `L̂` with `p²` times the classical bracket at `L̂ᵖ`.
///
/// The report also states the factor actually observed between the two
/// structures, whether or not it equals `p²`.
pub fn verify_power(shape: &LaxShape, p: u32, sampling: &Sampling) -> Result<Report> {
    let (target, images) = power_images(shape, p)?;
    let expected = int(p as i64 * p as i64);
    let mut report = Report::new(
        format!("power map L -> L^{p} on {shape}"),
        match target.floor() {
            None => "exact (differential)".to_string(),
            Some(f) => format!("L^{p} to floor {f}, brackets certified for i + j <= {}", target.count() + 1),
        },
    )
    .with_seed(sampling.seed);

    let base = poisson_matrix::<Classical>(shape)?.by_generator();
    let induced = induce(&target, &images, &base)?;
    let direct = poisson_matrix::<Classical>(&target)?.substitute(&images);

    let observed = observed_factor(&induced, &direct);
    let detail = match &observed {
        Some(c) => format!("observed induced = {c} * direct, expected {expected}"),
        None => format!("induced is not a constant multiple of direct; expected {expected}"),
    };
    let matrix_ok = direct
        .entries()
        .iter()
        .all(|(k, d)| induced.get(k.0, k.1) == Some(&d.scale(&expected)));
    report.check("matrix factor", matrix_ok, detail);

    let depth = target.certified_depth();
    let fields: Vec<Generator> = target.fields().filter(|(i, _)| *i <= depth).map(|(_, g)| g).collect();
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let f = sampler.functional(&fields);
        let g = sampler.functional(&fields);
        let direct = gd_bracket::<Classical>(&f, &g, &target)?.substitute(&images);
        let induced = gd_bracket::<Classical>(&f.substitute(&images), &g.substitute(&images), shape)?;
        report.check(format!("pair {}", s + 1), induced == direct.scale(&expected), "");
    }
    Ok(report)
}

/// The constant `c` with `induced = c · direct` on every entry, if one exists.
fn observed_factor(induced: &crate::gdbracket::PoissonMatrix, direct: &crate::gdbracket::PoissonMatrix) -> Option<Rational> {
    let (k, d) = direct.entries().iter().find(|(_, d)| !d.is_zero())?;
    let e = induced.get(k.0, k.1)?;
    let (power, dc) = d.coeffs().next()?;
    let c = ratio(&e.coeff(power), dc)?;
    direct
        .entries()
        .iter()
        .all(|(k, d)| induced.get(k.0, k.1) == Some(&d.scale(&c)))
        .then_some(c)
}

fn ratio(a: &DiffPoly, b: &DiffPoly) -> Option<Rational> {
    let (m, bc) = b.terms().next()?;
    let c = a.coefficient(m) / bc;
    (a == &b.scale(&c)).then_some(c)
}
