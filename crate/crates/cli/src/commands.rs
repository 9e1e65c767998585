use std::collections::BTreeMap;

use laxalg::classical::{verify_power, verify_theorem3, Classical, Theorem3};
use laxalg::diffalg::DiffPoly;
use laxalg::gdbracket::{
    check_jacobi, gd_bracket, gradient_form, poisson_matrix, reduced_gradient, reduced_matrix, verify_inverse,
    verify_product, verify_reduced_inverse, window_text, LaxShape, Sampling,
};
use laxalg::miura::{verify_corollary2, verify_kw, verify_kwy};
use laxalg::psido::{Operator, Quantum, Rule};
use laxalg::syntax::{parse_functional, parse_operator, parse_poly};
use laxalg::{Error, Result};

use crate::render::{self, Output};
use crate::{Case, Global, Theorem, VerifyArgs};

fn sampling(g: &Global) -> Sampling {
    Sampling::new(g.samples, g.seed)
}

fn floor(g: &Global, given: Option<i32>) -> i32 {
    given.unwrap_or(-(g.depth as i32))
}

fn shape_of<R: Rule>(g: &Global, text: &str) -> Result<LaxShape> {
    LaxShape::from_operator(&parse_operator::<R>(text, g.depth)?)
}

fn reduced_shape<R: Rule>(g: &Global, text: &str) -> Result<LaxShape> {
    let shape = shape_of::<R>(g, text)?;
    if shape.field(1).is_some() {
        return Err(Error::InvalidShape(format!(
            "the reduction needs the {}^{} coefficient of {text} to be absent",
            R::SYMBOL,
            shape.order() - 1
        )));
    }
    shape.reduced()
}

pub fn mul(g: &Global, a: &str, b: &str) -> Result<Output> {
    if g.classical {
        mul_in::<Classical>(g, a, b)
    } else {
        mul_in::<Quantum>(g, a, b)
    }
}

fn mul_in<R: Rule>(g: &Global, a: &str, b: &str) -> Result<Output> {
    let a: Operator<R> = parse_operator(a, g.depth)?;
    let b: Operator<R> = parse_operator(b, g.depth)?;
    Ok(render::operator(&a.mul(&b), g.format))
}

pub fn inv(g: &Global, a: &str) -> Result<Output> {
    if g.classical {
        inv_in::<Classical>(g, a)
    } else {
        inv_in::<Quantum>(g, a)
    }
}

fn inv_in<R: Rule>(g: &Global, a: &str) -> Result<Output> {
    let a: Operator<R> = parse_operator(a, g.depth)?;
    Ok(render::operator(&a.inverse(-(g.depth as i32))?, g.format))
}

pub fn adler(g: &Global, lax: &str, x: &str) -> Result<Output> {
    if g.classical {
        adler_in::<Classical>(g, lax, x)
    } else {
        adler_in::<Quantum>(g, lax, x)
    }
}

fn adler_in<R: Rule>(g: &Global, lax: &str, x: &str) -> Result<Output> {
    let l: Operator<R> = parse_operator(lax, g.depth)?;
    let x: Operator<R> = parse_operator(x, g.depth)?;
    Ok(render::operator(&R::adler(&l, &x)?, g.format))
}

pub fn bracket(g: &Global, lax: &str, f: &str, h: &str) -> Result<Output> {
    if g.classical {
        bracket_in::<Classical>(g, lax, f, h)
    } else {
        bracket_in::<Quantum>(g, lax, f, h)
    }
}

fn bracket_in<R: Rule>(g: &Global, lax: &str, f: &str, h: &str) -> Result<Output> {
    let shape = shape_of::<R>(g, lax)?;
    let b = gd_bracket::<R>(&parse_functional(f)?, &parse_functional(h)?, &shape)?;
    Ok(render::functional(&b, &window_text(&shape), g.format))
}

pub fn matrix(g: &Global, lax: &str, reduced: bool) -> Result<Output> {
    if g.classical {
        matrix_in::<Classical>(g, lax, reduced)
    } else {
        matrix_in::<Quantum>(g, lax, reduced)
    }
}

fn matrix_in<R: Rule>(g: &Global, lax: &str, reduced: bool) -> Result<Output> {
    let (shape, m) = if reduced {
        let shape = reduced_shape::<R>(g, lax)?;
        let m = reduced_matrix::<R>(&shape)?;
        (shape, m)
    } else {
        let shape = shape_of::<R>(g, lax)?;
        let m = poisson_matrix::<R>(&shape)?;
        (shape, m)
    };
    Ok(render::matrix(&m, &window_text(&shape), g.format))
}

pub fn reduce_gradient(g: &Global, lax: &str, f: Option<&str>, components: &[String]) -> Result<Output> {
    if g.classical {
        reduce_gradient_in::<Classical>(g, lax, f, components)
    } else {
        reduce_gradient_in::<Quantum>(g, lax, f, components)
    }
}

fn reduce_gradient_in<R: Rule>(g: &Global, lax: &str, f: Option<&str>, components: &[String]) -> Result<Output> {
    let shape = reduced_shape::<R>(g, lax)?;
    let comps: BTreeMap<u32, DiffPoly> = match f {
        Some(f) => gradient_form(&parse_functional(f)?, &shape)?.components().clone(),
        None => {
            let mut out = BTreeMap::new();
            for c in components {
                let (slot, poly) = c
                    .split_once('=')
                    .ok_or_else(|| Error::Unsupported(format!("component {c:?} is not of the form slot=poly")))?;
                let slot: u32 = slot
                    .trim()
                    .parse()
                    .map_err(|_| Error::Unsupported(format!("bad slot {slot:?}")))?;
                out.insert(slot, parse_poly(poly)?);
            }
            out
        }
    };
    let x = reduced_gradient::<R>(&comps, &shape)?;
    Ok(render::one_form(&x, &window_text(&shape), g.format))
}

pub fn verify(g: &Global, args: &VerifyArgs) -> Result<Output> {
    let s = sampling(g);
    let a_or = |default: &str| args.a.clone().unwrap_or_else(|| default.to_string());
    let b_or = |default: &str| args.b.clone().unwrap_or_else(|| default.to_string());
    let quantum_only = matches!(args.what, Theorem::Kw | Theorem::Kwy | Theorem::Corollary2);
    if args.what == Theorem::Power && !g.classical {
        return Err(Error::Unsupported(
            "verify power is only defined for classical symbols; pass --classical".into(),
        ));
    }
    if quantum_only && g.classical {
        return Err(Error::Unsupported("the Miura checks are quantum only".into()));
    }
    let report = match args.what {
        Theorem::Theorem1 if g.classical => {
            verify_product::<Classical>(&shape_of::<Classical>(g, &a_or("Xi+a"))?, &shape_of::<Classical>(g, &b_or("Xi+b"))?, &s)?
        }
        Theorem::Theorem1 => verify_product::<Quantum>(&shape_of::<Quantum>(g, &a_or("D+a"))?, &shape_of::<Quantum>(g, &b_or("D+b"))?, &s)?,
        Theorem::Theorem2 if g.classical => {
            verify_inverse::<Classical>(&shape_of::<Classical>(g, &a_or("Xi+a"))?, floor(g, args.floor), &s)?
        }
        Theorem::Theorem2 => verify_inverse::<Quantum>(&shape_of::<Quantum>(g, &a_or("D+a"))?, floor(g, args.floor), &s)?,
        Theorem::Theorem3 => {
            let a = shape_of::<Classical>(g, &a_or("Xi+a"))?;
            let case = match args.case {
                Case::Product => Theorem3::Product(a, shape_of::<Classical>(g, &b_or("Xi+b"))?),
                Case::Inverse => Theorem3::Inverse(a, floor(g, args.floor)),
            };
            verify_theorem3(&case, &s)?
        }
        Theorem::Kw => verify_kw(args.n.unwrap_or(2), &s)?,
        Theorem::Kwy => verify_kwy(args.n.unwrap_or(2), args.m.unwrap_or(1), floor(g, args.floor), &s)?,
        Theorem::Corollary2 => verify_corollary2(
            &shape_of::<Quantum>(g, &a_or("D^2+a1*D+a2"))?,
            &shape_of::<Quantum>(g, &b_or("D+b"))?,
            floor(g, args.floor),
            &s,
        )?,
        Theorem::Power => verify_power(
            &shape_of::<Classical>(g, args.lax.as_deref().unwrap_or("Xi+u"))?,
            args.p.unwrap_or(2),
            &s,
        )?,
        Theorem::Jacobi if g.classical => {
            check_jacobi::<Classical>(&shape_of::<Classical>(g, args.lax.as_deref().unwrap_or("Xi^2+u1*Xi+u2"))?, &s)?
        }
        Theorem::Jacobi => check_jacobi::<Quantum>(&shape_of::<Quantum>(g, args.lax.as_deref().unwrap_or("D^2+u1*D+u2"))?, &s)?,
        Theorem::ReducedInverse if g.classical => {
            verify_reduced_inverse::<Classical>(&reduced_shape::<Classical>(g, &a_or("Xi^2+u2"))?, floor(g, args.floor), &s)?
        }
        Theorem::ReducedInverse => {
            verify_reduced_inverse::<Quantum>(&reduced_shape::<Quantum>(g, &a_or("D^2+u2"))?, floor(g, args.floor), &s)?
        }
    };
    Ok(render::report(&report, g.format))
}
