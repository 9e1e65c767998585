//! Miura factorisations `L = (∂+φ₁)⋯(∂+φₙ)(∂+ψ₁)⁻¹⋯(∂+ψₘ)⁻¹` and the
//! brackets they induce from free fields.
//!
//! A free field `φ` carries the bracket of the first-order operator `∂+φ`,
//! read off by probing rather than fixed by hand; `ψ` fields carry its
//! negative. With that unit every check below expects `induced = direct`.

use std::collections::BTreeMap;

use crate::diffalg::{int, DiffPoly, Functional, Generator, LocalOperator};
use crate::error::{Error, Result};
use crate::gdbracket::{induce, poisson_matrix, window_text, Factor, Factorization, LaxShape, PoissonMatrix, Sampling};
use crate::psido::{PsiDO, Quantum, Rule};
use crate::report::Report;

/// First-order monic factors over independent fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizedLax {
    phi: Vec<Generator>,
    psi: Vec<Generator>,
    floor: i32,
}

impl FactorizedLax {
    /// Fields `phi1..phin` and `psi1..psim`; `floor` truncates the expansion
    /// when `m > 0`.
    pub fn new(n: u32, m: u32, floor: i32) -> Result<Self> {
        let phi = (1..=n).map(|i| Generator::indexed("phi", i)).collect();
        let psi = (1..=m).map(|j| Generator::indexed("psi", j)).collect();
        Self::with_fields(phi, psi, floor)
    }

    pub fn with_fields(phi: Vec<Generator>, psi: Vec<Generator>, floor: i32) -> Result<Self> {
        if phi.is_empty() {
            return Err(Error::InvalidShape("at least one (D + phi) factor is required".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(g) = phi.iter().chain(&psi).find(|g| !seen.insert(**g)) {
            return Err(Error::InvalidShape(format!("field {g} appears in two factors")));
        }
        if phi.iter().chain(&psi).any(|g| g.name() == "u") {
            return Err(Error::InvalidShape("the field family u is reserved for L".into()));
        }
        Ok(FactorizedLax { phi, psi, floor })
    }

    pub fn order(&self) -> i32 {
        self.phi.len() as i32 - self.psi.len() as i32
    }

    /// The expansion window, `None` when `L` is differential.
    pub fn floor(&self) -> Option<i32> {
        (!self.psi.is_empty()).then_some(self.floor)
    }

    pub fn phi(&self) -> &[Generator] {
        &self.phi
    }

    pub fn psi(&self) -> &[Generator] {
        &self.psi
    }

    /// The same product as a general factorisation, `ψ` factors inverted and
    /// carrying `−GD`. Order-0 products have no such form.
    pub fn factorization(&self) -> Result<Factorization> {
        let first = |g: Generator| LaxShape::new(1, None, vec![Some(g)]);
        let mut factors = Vec::new();
        for &g in &self.phi {
            factors.push(Factor::direct(first(g)?));
        }
        for &g in &self.psi {
            factors.push(Factor::inverted(first(g)?).with_sign(-1));
        }
        Factorization::new(factors, self.floor)
    }

    /// The expanded operator and `uₖ(φ, ψ)`, its `∂ⁿ⁻ᵏ` coefficient.
    pub fn expand(&self) -> Result<(PsiDO, BTreeMap<u32, DiffPoly>)> {
        let n = self.order();
        let first = |g: Generator| PsiDO::differential([(1, DiffPoly::one()), (0, DiffPoly::gen(g))]);
        let mut l = PsiDO::one();
        for &g in &self.phi {
            l = l.mul(&first(g));
        }
        for &g in &self.psi {
            // each inverse is later multiplied by operators of total order n + 1
            l = l.mul(&first(g).inverse(self.floor - n - 1)?);
        }
        let lowest = match self.floor() {
            None => 0,
            Some(t) => {
                l = l.truncated(t);
                t
            }
        };
        let mut images = BTreeMap::new();
        for k in 1..=(n - lowest) {
            images.insert(k as u32, l.coeff(n - k)?);
        }
        Ok((l, images))
    }

    pub fn free_fields(&self) -> Result<FreeFieldStructure> {
        let sig = self
            .phi
            .iter()
            .map(|&g| (g, 1))
            .chain(self.psi.iter().map(|&g| (g, -1)))
            .collect();
        FreeFieldStructure::probed::<Quantum>(sig)
    }

    /// `Dᵏˡ = Σ_α F_kα ∘ (σ_α D) ∘ F_lα†` on the certified fields of `L`.
    pub fn induced_matrix(&self) -> Result<PoissonMatrix> {
        let (shape, images) = self.factorization()?.target::<Quantum>()?;
        induce(&shape, &images, &self.free_fields()?.matrix())
    }
}

/// Diagonal brackets `{αᵢ, αⱼ} = δᵢⱼ σᵢ D` for free fields with signature `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeFieldStructure {
    signature: BTreeMap<Generator, i64>,
    unit: LocalOperator,
}

impl FreeFieldStructure {
    pub fn new(signature: BTreeMap<Generator, i64>, unit: LocalOperator) -> Result<Self> {
        if let Some((g, s)) = signature.iter().find(|(_, s)| s.abs() != 1) {
            return Err(Error::InvalidShape(format!("signature of {g} is {s}, expected +1 or -1")));
        }
        Ok(FreeFieldStructure { signature, unit })
    }

    /// Takes `D` from the bracket of `∂ + a` under the rule `R`.
    pub fn probed<R: Rule>(signature: BTreeMap<Generator, i64>) -> Result<Self> {
        let m = poisson_matrix::<R>(&LaxShape::kdv(1, "a")?)?;
        let unit = m.get(1, 1).cloned().ok_or_else(|| Error::Inconsistent("no bracket on D + a".into()))?;
        Self::new(signature, unit)
    }

    pub fn unit(&self) -> &LocalOperator {
        &self.unit
    }

    pub fn signature(&self) -> &BTreeMap<Generator, i64> {
        &self.signature
    }

    /// Every pair of fields, zero off the diagonal.
    pub fn matrix(&self) -> BTreeMap<(Generator, Generator), LocalOperator> {
        let mut out = BTreeMap::new();
        for (&a, &s) in &self.signature {
            for &b in self.signature.keys() {
                let d = if a == b { self.unit.scale(&int(s)) } else { LocalOperator::zero() };
                out.insert((a, b), d);
            }
        }
        out
    }

    /// `∫ Σ_α σ_α (δF/δα) D (δG/δα)`.
    pub fn bracket(&self, f: &Functional, g: &Functional) -> Functional {
        let mut total = DiffPoly::zero();
        for (&a, &s) in &self.signature {
            let df = f.variational_derivative(a);
            if df.is_zero() {
                continue;
            }
            total += &df * &self.unit.apply(&g.variational_derivative(a)).scale_int(s);
        }
        Functional::new(total)
    }
}

/// Kupershmidt–Wilson: `n` free fields induce `GD(L)` on `L = ∏(∂+φᵢ)`.
pub fn verify_kw(n: u32, sampling: &Sampling) -> Result<Report> {
    verify_kwy(n, 0, 0, sampling)
}

/// Kupershmidt–Wilson–Yu: `φ` and `ψ` free fields of opposite signs induce
/// `GD(L)` on the certified fields of `L = ∏(∂+φᵢ) ∏(∂+ψⱼ)⁻¹`.
pub fn verify_kwy(n: u32, m: u32, floor: i32, sampling: &Sampling) -> Result<Report> {
    let lax = FactorizedLax::new(n, m, floor)?;
    let (shape, images) = lax.factorization()?.target::<Quantum>()?;
    let free = lax.free_fields()?;
    let title = if m == 0 {
        format!("{shape} from {n} free fields")
    } else {
        format!("{shape} from {n} + {m} free fields")
    };
    let mut report = Report::new(title, window_text(&shape)).with_seed(sampling.seed);

    let gd = poisson_matrix::<Quantum>(&shape)?;
    let induced = induce(&shape, &images, &free.matrix())?;
    let direct = gd.substitute(&images);
    report.check(
        "matrix",
        induced == direct && !direct.entries().is_empty(),
        format!("{} certified entries", direct.entries().len()),
    );

    let depth = shape.certified_depth();
    let fields: Vec<Generator> = shape.fields().filter(|(i, _)| *i <= depth).map(|(_, g)| g).collect();
    let mut sampler = sampling.sampler();
    for s in 0..sampling.samples {
        let f = sampler.functional(&fields);
        let g = sampler.functional(&fields);
        let lhs = gd.contract_at(&f, &g, &images)?;
        let rhs = free.bracket(&f.substitute(&images), &g.substitute(&images));
        report.check(format!("pair {}", s + 1), lhs == rhs, "");
    }
    Ok(report)
}

/// `L = A B⁻¹` with `+GD` on `A` and `−GD` on `B` induces `GD(L)`.
pub fn verify_corollary2(a: &LaxShape, b: &LaxShape, floor: i32, sampling: &Sampling) -> Result<Report> {
    Factorization::new(vec![Factor::direct(a.clone()), Factor::inverted(b.clone()).with_sign(-1)], floor)?
        .verify::<Quantum>(1, sampling)
}

#[cfg(test)]
mod tests;
