use super::*;
use crate::diffalg::{q, Generator, LocalOperator};
use crate::gdbracket::{poisson_matrix, LaxShape, Sampling};

fn d(name: &str, k: u32) -> DiffPoly {
    DiffPoly::gen_derivative(Generator::parse(name).unwrap(), k)
}

fn xi(k: i32, c: DiffPoly) -> Symbol {
    Symbol::power_times(k, &c, if k < 0 { Some(-6) } else { None })
}

#[test]
fn symbols_commute() {
    let u = Symbol::constant(d("u", 0));
    let x = Symbol::power(1, None);
    assert_eq!(x.mul(&u), u.mul(&x));
    assert_eq!(x.mul(&u).to_string(), "u*Xi");
    let op = PsiDO::differential([(2, DiffPoly::one()), (0, d("u", 0))]);
    assert_eq!(operator_of(&symbol_of(&op)), op);
    let inv = Symbol::power(1, None).add(&u).inverse(-3).unwrap();
    let expected = Symbol::from_coeffs([(-1, DiffPoly::one()), (-2, -d("u", 0)), (-3, d("u", 0).pow(2))], Some(-3));
    assert_eq!(inv, expected);
}

#[test]
fn two_dimensional_bracket() {
    let p = xi(2, DiffPoly::one()).add(&Symbol::constant(d("u", 0)));
    let x = xi(1, DiffPoly::one());
    assert_eq!(poisson2d(&p, &x), Symbol::constant(d("u", 1)));
    assert_eq!(poisson2d(&x, &Symbol::constant(d("u", 0))), Symbol::constant(-d("u", 1)));
    assert!(poisson2d(&p, &p).is_zero());
    // [[u ξ, v ξ²]] = u′ · 2v ξ − v′ξ² · u = (2u′v − uv′) ξ²
    let a = xi(1, d("u", 0));
    let b = xi(2, d("v", 0));
    let expected = xi(2, (&d("u", 1) * &d("v", 0)).scale_int(2) - &d("u", 0) * &d("v", 1));
    assert_eq!(poisson2d(&a, &b), expected);
}

#[test]
fn bracket_jacobi_on_monomials() {
    let a = xi(1, d("u", 0));
    let b = xi(2, d("v", 0));
    let c = xi(-1, d("w", 0));
    let cyc = poisson2d(&a, &poisson2d(&b, &c))
        .add(&poisson2d(&b, &poisson2d(&c, &a)))
        .add(&poisson2d(&c, &poisson2d(&a, &b)));
    assert!(cyc.is_zero());
}

#[test]
fn classical_adler_first_order() {
    // L = ξ + a, X = ξ⁻¹x: [[L, X]]₊ = 0 and (XL)₊ = x, so J(X) = −[[L, x]] = x′
    let l = xi(1, DiffPoly::one()).add(&Symbol::constant(d("a", 0)));
    let x = xi(-1, d("x", 0));
    assert_eq!(classical_adler(&l, &x).unwrap(), Symbol::constant(d("x", 1)));
    let m = poisson_matrix::<Classical>(&LaxShape::kdv(1, "a").unwrap()).unwrap();
    assert_eq!(m.get(1, 1), Some(&LocalOperator::derivation()));
}

#[test]
fn classical_adler_second_order() {
    let shape = LaxShape::kdv(2, "u").unwrap();
    let m = poisson_matrix::<Classical>(&shape).unwrap();
    assert!(m.is_antisymmetric());
    assert_eq!(m.get(1, 1).unwrap().as_constant_derivation(), Some(q(2, 1)));
    // no dispersion survives: every entry has order at most one
    assert!(m.entries().values().all(|d| d.coeffs().all(|(k, _)| k <= 1)));
    let x = xi(-1, d("x", 0)).add(&xi(-2, d("y", 0)));
    let j = classical_adler(&shape.lax(), &x).unwrap();
    assert!(j.is_differential() && j.order().unwrap() <= 1);
}

#[test]
fn power_map_images() {
    let shape = LaxShape::kdv(1, "u").unwrap();
    let (target, images) = power_images(&shape, 2).unwrap();
    assert_eq!(target.order(), 2);
    let w1 = Generator::indexed("w", 1);
    let w2 = Generator::indexed("w", 2);
    assert_eq!(images[&w1], d("u1", 0).scale_int(2));
    assert_eq!(images[&w2], d("u1", 0).pow(2));
    assert!(power_images(&shape, 0).is_err());
}

#[test]
fn power_map_reports_the_observed_factor() {
    let shape = LaxShape::kdv(1, "u").unwrap();
    let report = verify_power(&shape, 2, &Sampling::new(2, 1)).unwrap();
    let detail = &report.checks[0].detail;
    assert!(detail.starts_with("observed induced = 2 * direct"), "{detail}");
}

#[test]
fn theorem3_cases() {
    let a = LaxShape::kdv(1, "a").unwrap();
    let b = LaxShape::kdv(1, "b").unwrap();
    let product = verify_theorem3(&Theorem3::Product(a.clone(), b), &Sampling::new(3, 9)).unwrap();
    assert!(product.passed(), "{product}");
    let inverse = verify_theorem3(&Theorem3::Inverse(a.clone(), -5), &Sampling::new(3, 9)).unwrap();
    assert!(inverse.passed(), "{inverse}");
    let zero = Functional::zero();
    assert!(classical_bracket(&zero, &zero, &a).unwrap().is_zero());
    assert!(classical_matrix(&a).unwrap().is_antisymmetric());
}
