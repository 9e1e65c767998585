use super::*;
use crate::classical::Symbol;
use crate::diffalg::{q, DiffPoly, Functional, Generator};
use crate::error::Error;
use crate::gdbracket::{poisson_matrix, LaxShape};
use crate::psido::{PsiDO, Quantum};

fn d(name: &str, k: u32) -> DiffPoly {
    DiffPoly::gen_derivative(Generator::parse(name).unwrap(), k)
}

fn op(text: &str) -> PsiDO {
    parse_operator::<Quantum>(text, 6).unwrap()
}

#[test]
fn kdv_operator() {
    let l = op("D^2 + u1*D + u2");
    assert_eq!(l, PsiDO::differential([(2, DiffPoly::one()), (1, d("u1", 0)), (0, d("u2", 0))]));
    assert!(l.is_exact());
}

#[test]
fn composition_is_noncommutative() {
    assert_eq!(op("D*u"), op("u*D + u'"));
    assert_ne!(op("D*u"), op("u*D"));
    let xu = parse_operator::<crate::classical::Classical>("Xi*u", 6).unwrap();
    assert_eq!(xu, parse_operator::<crate::classical::Classical>("u*Xi", 6).unwrap());
}

#[test]
fn inverse_to_depth() {
    let inv = parse_operator::<Quantum>("inv(D + a)", 4).unwrap();
    assert_eq!(inv.floor(), Some(-4));
    assert_eq!(inv.coeff(-1).unwrap(), DiffPoly::one());
    assert_eq!(inv.coeff(-2).unwrap(), -d("a", 0));
    assert_eq!(inv.coeff(-3).unwrap(), d("a", 0).pow(2) + d("a", 1));
    let neg = parse_operator::<Quantum>("D^-2", 4).unwrap();
    assert_eq!(neg, PsiDO::power(-2, Some(-4)));
    assert_eq!(parse_operator::<Quantum>("D^(-2)", 4).unwrap(), neg);
    assert!(matches!(
        parse_operator::<Quantum>("D^-5", 4),
        Err(Error::FloorTooHigh { power: -5, floor: -4 })
    ));
}

#[test]
fn errors_carry_columns() {
    match parse_operator::<Quantum>("D^2 +", 6) {
        Err(Error::Parse(e)) => {
            assert_eq!(e.column, 6);
            assert!(e.expected.contains(&"field".to_string()));
        }
        other => panic!("{other:?}"),
    }
    match parse_operator::<Quantum>("D^2 + Xi", 6) {
        Err(Error::Mode(e)) => assert_eq!((e.column, e.found.as_str()), (7, "Xi")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_operator::<crate::classical::Classical>("D", 6), Err(Error::Mode(_))));
    assert!(matches!(parse_operator::<Quantum>("(D", 6), Err(Error::Parse(_))));
    assert!(matches!(parse_operator::<Quantum>("u2x", 6), Err(Error::Parse(_))));
    assert!(matches!(parse_operator::<Quantum>("u # v", 6), Err(Error::Parse(e)) if e.column == 3));
    assert!(matches!(parse_operator::<Quantum>("u/0", 6), Err(Error::Parse(_))));
    assert!(matches!(parse_operator::<Quantum>("(D+u)^-1", 6), Err(Error::Parse(_))));
    assert!(matches!(parse_operator::<Quantum>("inv(2*D)", 6), Err(Error::NotMonic { .. })));
    assert!(matches!(parse_operator::<Quantum>("_w", 6), Err(Error::Parse(_))));
    let deep = format!("{}u{}", "(".repeat(100), ")".repeat(100));
    assert!(parse_operator::<Quantum>(&deep, 6).is_err());
    assert!(parse_poly("u^1000").is_err());
}

#[test]
fn polynomials_and_functionals() {
    assert_eq!(parse_poly("a^2 + a'").unwrap(), d("a", 0).pow(2) + d("a", 1));
    assert_eq!(parse_poly("(u*v)'").unwrap(), (&d("u", 0) * &d("v", 0)).derivative());
    assert_eq!(parse_poly("-3/2*u").unwrap(), d("u", 0).scale(&q(-3, 2)));
    assert_eq!(parse_poly("2^-1*u").unwrap(), d("u", 0).scale(&q(1, 2)));
    assert_eq!(parse_poly("phi12''").unwrap(), d("phi12", 2));
    assert!(parse_poly("D").is_err());
    let f = parse_functional("int(a^2*a''')").unwrap();
    assert_eq!(f, Functional::new(d("a", 1).pow(3)));
    assert_eq!(parse_functional("a'^2").unwrap(), Functional::new(d("a", 1).pow(2)));
    assert_eq!(parse_functional("2*int(a) - int(a)").unwrap(), Functional::new(d("a", 0)));
    assert!(parse_functional("int(a) + a").is_err());
    assert!(parse_functional("int(D)").is_err());
}

#[test]
fn printed_operators_parse_back() {
    for text in [
        "D^2 - 3/2*u*D + v - 1 + (a^2 + a')*D^-2",
        "-D",
        "D^3 + 2*u2*u1'^2*D^-1 - u3''*D^-6",
        "0",
    ] {
        let a = op(text);
        assert_eq!(op(&a.to_string()), a, "{text}");
    }
    let s = parse_operator::<crate::classical::Classical>("Xi^2 + u*Xi^-1", 3).unwrap();
    assert_eq!(s.to_string(), "Xi^2 + u*Xi^-1");
    assert_eq!(parse_operator::<crate::classical::Classical>(&s.to_string(), 3).unwrap(), s);
    let _: Symbol = s;
}

#[test]
fn json_round_trips() {
    let shape = LaxShape::kdv(3, "u").unwrap();
    let m = poisson_matrix::<Quantum>(&shape).unwrap();
    let text = serde_json::to_string(&json::matrix_json(&m)).unwrap();
    assert_eq!(json::decode_matrix(&text).unwrap(), m);
    assert!(text.contains("\"entries\":[{\"i\":1,\"j\":1,\"operator\":[{\"power\":1,\"coeff\":[{\"monomial\":[],\"num\":\"-3\",\"den\":\"1\"}]}]}"));

    let reduced = LaxShape::kdv(2, "u").unwrap().reduced().unwrap();
    let m = crate::gdbracket::reduced_matrix::<Quantum>(&reduced).unwrap();
    let text = serde_json::to_string(&json::matrix_json(&m)).unwrap();
    assert_eq!(json::decode_matrix(&text).unwrap(), m);

    let a = op("D^2 - 3/2*u*D + (a^2 + a')*D^-2");
    let text = serde_json::to_string(&json::operator_json(&a)).unwrap();
    assert_eq!(json::decode_operator::<Quantum>(&text).unwrap(), a);
    assert!(json::decode_operator::<crate::classical::Classical>(&text).is_err());

    let f = parse_functional("int(u'^2 + 1/3*u^3)").unwrap();
    let text = serde_json::to_string(&json::functional_json(&f)).unwrap();
    assert_eq!(json::decode_functional(&text).unwrap(), f);

    assert!(json::decode_matrix("{").is_err());
    assert!(json::decode_operator::<Quantum>(r#"{"symbol":"D","floor":null,"terms":[{"power":-1,"coeff":[]}]}"#).is_err());
    assert!(json::decode_functional(r#"{"integrand":[{"monomial":[],"num":"1","den":"0"}]}"#).is_err());
}

#[test]
fn latex_rendering() {
    let a = op("D^2 - 3/2*u1*D + phi'^2");
    assert_eq!(latex::operator(&a), "\\partial^{2} - \\frac{3}{2} u_{1} \\partial + \\left(\\phi'\\right)^{2}");
    let inv = parse_operator::<Quantum>("inv(D + a)", 2).unwrap();
    assert_eq!(latex::operator(&inv), "\\partial^{-1} - a \\partial^{-2} + O\\left(\\partial^{-3}\\right)");
    let f = parse_functional("int(a''''*a)").unwrap();
    assert_eq!(latex::functional(&f), "\\int \\left(a''\\right)^{2} \\, dx");
    let m = poisson_matrix::<Quantum>(&LaxShape::kdv(1, "a").unwrap()).unwrap();
    assert_eq!(latex::matrix(&m), "\\begin{aligned}\n  \\{a_{1}, a_{1}\\} &= -\\partial \\\\\n\\end{aligned}");
}
