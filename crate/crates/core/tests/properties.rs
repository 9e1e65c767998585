use laxalg::classical::{poisson2d, Symbol};
use laxalg::diffalg::{ibp_normal_form, integrate_exact, q, DiffPoly, Functional, Generator, Monomial, Var};
use laxalg::psido::PsiDO;
use laxalg::syntax::{parse_operator, parse_poly};
use proptest::prelude::*;

const GENS: [&str; 2] = ["u", "v"];

fn poly() -> impl Strategy<Value = DiffPoly> {
    let factor = (0..GENS.len(), 0u32..4, 1u32..3);
    let term = (-5i64..=5, 1i64..4, prop::collection::vec(factor, 0..3));
    prop::collection::vec(term, 0..4).prop_map(|terms| {
        let mut p = DiffPoly::zero();
        for (num, den, factors) in terms {
            let m = Monomial::from_factors(
                factors
                    .into_iter()
                    .map(|(g, k, e)| (Var::new(Generator::plain(GENS[g]), k), e)),
            );
            p += DiffPoly::term(q(num, den), m);
        }
        p
    })
}

/// Monic operators of order 1 or 2 with random lower coefficients.
fn monic() -> impl Strategy<Value = PsiDO> {
    (1i32..3, prop::collection::vec(poly(), 2)).prop_map(|(n, lower)| {
        let mut coeffs = vec![(n, DiffPoly::one())];
        coeffs.extend(lower.into_iter().enumerate().map(|(i, c)| (n - 1 - i as i32, c)));
        PsiDO::from_coeffs(coeffs.into_iter().filter(|(k, _)| *k >= 0), None)
    })
}

/// Operators with powers in `-3..=2`, either differential or with a tail down to `D^-6`.
fn operator() -> impl Strategy<Value = PsiDO> {
    (any::<bool>(), prop::collection::vec(poly(), 6)).prop_map(|(tail, cs)| {
        if tail {
            let mut coeffs: Vec<(i32, DiffPoly)> = cs.into_iter().enumerate().map(|(i, c)| (2 - i as i32, c)).collect();
            // keep a D^-1 term so the printed form carries the tail
            coeffs[3].1 = coeffs[3].1.clone() + DiffPoly::one();
            PsiDO::from_coeffs(coeffs, Some(-6))
        } else {
            PsiDO::from_coeffs(cs.into_iter().take(3).enumerate().map(|(i, c)| (2 - i as i32, c)), None)
        }
    })
}

fn symbol() -> impl Strategy<Value = Symbol> {
    prop::collection::vec(poly(), 3).prop_map(|cs| Symbol::from_coeffs(cs.into_iter().enumerate().map(|(i, c)| (i as i32, c)), None))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_idempotent(p in poly()) {
        let nf = ibp_normal_form(&p);
        prop_assert_eq!(ibp_normal_form(&nf), nf);
    }

    #[test]
    fn normal_form_is_linear(a in poly(), b in poly(), c in -4i64..5) {
        prop_assert_eq!(ibp_normal_form(&(a.clone() + b.clone())), ibp_normal_form(&a) + ibp_normal_form(&b));
        prop_assert_eq!(ibp_normal_form(&a.scale(&q(c, 3))), ibp_normal_form(&a).scale(&q(c, 3)));
    }

    #[test]
    fn total_derivatives_vanish(p in poly()) {
        let dp = p.derivative();
        prop_assert!(ibp_normal_form(&dp).is_zero());
        prop_assert!(Functional::is_zero_by_euler(&dp));
        prop_assert_eq!(integrate_exact(&dp).unwrap().derivative(), dp);
    }

    #[test]
    fn normal_form_agrees_with_euler(p in poly()) {
        prop_assert_eq!(ibp_normal_form(&p).is_zero(), Functional::is_zero_by_euler(&p));
        let f = Functional::new(p.clone());
        let g = Generator::plain("u");
        prop_assert_eq!(f.variational_derivative(g), p.variational_derivative(g));
    }

    #[test]
    fn adjoint_is_an_involution(p in poly()) {
        let l = p.frechet_derivative(Generator::plain("u"));
        prop_assert_eq!(l.adjoint().adjoint(), l);
    }

    #[test]
    fn composition_is_associative(a in operator(), b in operator(), c in operator()) {
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        prop_assert_eq!(left.floor(), right.floor());
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn inverse_is_two_sided(a in monic()) {
        let b = a.inverse(-6).unwrap();
        prop_assert!(a.mul(&b).agrees_with(&PsiDO::one()));
        prop_assert!(b.mul(&a).agrees_with(&PsiDO::one()));
    }

    #[test]
    fn printed_operators_parse_back(a in operator()) {
        prop_assert_eq!(parse_operator(&a.to_string(), 6).unwrap(), a);
    }

    #[test]
    fn printed_polynomials_parse_back(p in poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn poisson2d_satisfies_jacobi(a in symbol(), b in symbol(), c in symbol()) {
        let cyclic = poisson2d(&a, &poisson2d(&b, &c))
            .add(&poisson2d(&b, &poisson2d(&c, &a)))
            .add(&poisson2d(&c, &poisson2d(&a, &b)));
        prop_assert!(cyclic.agrees_with(&Symbol::zero()));
        prop_assert!(poisson2d(&a, &b).add(&poisson2d(&b, &a)).agrees_with(&Symbol::zero()));
    }
}
