use super::*;
use crate::diffalg::Generator;

fn g(name: &str) -> Generator {
    Generator::parse(name).unwrap()
}

fn f(name: &str) -> DiffPoly {
    DiffPoly::gen(g(name))
}

fn first(name: &str) -> PsiDO {
    PsiDO::differential([(1, DiffPoly::one()), (0, f(name))])
}

#[test]
fn expansion_of_two_factors() {
    let lax = FactorizedLax::with_fields(vec![g("a"), g("b")], vec![], 0).unwrap();
    let (l, u) = lax.expand().unwrap();
    assert!(l.is_exact());
    assert_eq!(u[&1], f("a") + f("b"));
    assert_eq!(u[&2], &f("a") * &f("b") + f("b").derivative());
    assert_eq!(l, first("a").mul(&first("b")));
}

#[test]
fn single_factor_is_the_identity_embedding() {
    let lax = FactorizedLax::new(1, 0, 0).unwrap();
    let (_, u) = lax.expand().unwrap();
    assert_eq!(u, BTreeMap::from([(1, f("phi1"))]));
    let m = lax.induced_matrix().unwrap();
    assert_eq!(m.get(1, 1), Some(lax.free_fields().unwrap().unit()));
}

#[test]
fn expansion_with_an_inverse_factor() {
    let lax = FactorizedLax::with_fields(vec![g("phi")], vec![g("psi")], -2).unwrap();
    let (l, u) = lax.expand().unwrap();
    assert_eq!(l.floor(), Some(-2));
    let expected = PsiDO::from_coeffs(
        [
            (0, DiffPoly::one()),
            (-1, f("phi") - f("psi")),
            (-2, &f("psi") * &(f("psi") - f("phi"))),
        ],
        Some(-2),
    );
    assert_eq!(l, expected);
    assert_eq!(u.len(), 2);
    // right-multiplying by (D + psi) gives back D + phi on the window
    assert!(l.mul(&first("psi")).agrees_with(&first("phi")));
    assert!(lax.factorization().is_err());
}

#[test]
fn expansion_is_multiplicative() {
    let lax = FactorizedLax::new(3, 1, -3).unwrap();
    let (l, _) = lax.expand().unwrap();
    let split = FactorizedLax::new(2, 0, 0).unwrap().expand().unwrap().0;
    let rest = FactorizedLax::with_fields(vec![g("phi3")], vec![g("psi1")], -5).unwrap().expand().unwrap().0;
    assert!(l.agrees_with(&split.mul(&rest)));
}

#[test]
fn invalid_factorisations() {
    assert!(FactorizedLax::new(0, 1, -3).is_err());
    assert!(FactorizedLax::with_fields(vec![g("a"), g("a")], vec![], 0).is_err());
    assert!(FactorizedLax::with_fields(vec![g("u1")], vec![], 0).is_err());
    let unit = LocalOperator::derivation();
    assert!(FreeFieldStructure::new(BTreeMap::from([(g("a"), 2)]), unit).is_err());
}

#[test]
fn free_field_unit_is_the_first_order_bracket() {
    let free = FreeFieldStructure::probed::<Quantum>(BTreeMap::from([(g("a"), 1), (g("b"), -1)])).unwrap();
    assert_eq!(free.unit(), &LocalOperator::derivation().neg());
    let m = free.matrix();
    assert_eq!(m.len(), 4);
    assert!(m[&(g("a"), g("b"))].is_zero());
    assert_eq!(m[&(g("b"), g("b"))], LocalOperator::derivation());
    let fa = Functional::new(f("a").pow(3));
    let fb = Functional::new(f("a").derivative().pow(2));
    assert_eq!(free.bracket(&fa, &fb), Functional::new(f("a").derivative().pow(3).scale_int(6)));
}

#[test]
fn kupershmidt_wilson_second_order() {
    let lax = FactorizedLax::new(2, 0, 0).unwrap();
    let (_, images) = lax.factorization().unwrap().target::<Quantum>().unwrap();
    let direct = poisson_matrix::<Quantum>(&LaxShape::kdv(2, "u").unwrap()).unwrap().substitute(&images);
    assert_eq!(lax.induced_matrix().unwrap(), direct);
    let report = verify_kw(2, &Sampling::new(3, 2)).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn kupershmidt_wilson_yu_small() {
    let report = verify_kwy(2, 1, -3, &Sampling::new(2, 4)).unwrap();
    assert!(report.passed(), "{report}");
    assert!(verify_kwy(1, 1, -3, &Sampling::new(1, 1)).is_err());
}
