//! LaTeX rendering: `\partial` powers, primes and `\frac` coefficients.

use num_traits::{One, Signed};

use crate::diffalg::{DiffPoly, Functional, Generator, LocalOperator, Monomial, Rational, Var};
use crate::gdbracket::PoissonMatrix;
use crate::psido::{Operator, Rule};

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "kappa", "lambda", "mu", "nu", "rho",
    "sigma", "tau", "phi", "chi", "psi", "omega",
];

pub fn generator(g: Generator) -> String {
    let base = if GREEK.contains(&g.name()) {
        format!("\\{}", g.name())
    } else {
        g.name().to_string()
    };
    match g.index() {
        Some(i) => format!("{base}_{{{i}}}"),
        None => base,
    }
}

fn var(v: Var, exp: u32) -> String {
    let mut s = generator(v.gen);
    match v.order {
        0 => {}
        k @ 1..=3 => s.push_str(&"'".repeat(k as usize)),
        k => s.push_str(&format!("^{{({k})}}")),
    }
    if exp > 1 {
        if v.order > 0 {
            s = format!("\\left({s}\\right)");
        }
        s.push_str(&format!("^{{{exp}}}"));
    }
    s
}

fn monomial(m: &Monomial) -> String {
    m.factors().iter().map(|&(v, e)| var(v, e)).collect::<Vec<_>>().join(" ")
}

fn magnitude(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

pub fn poly(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        if m.is_one() {
            out.push_str(&magnitude(&mag));
        } else if mag.is_one() {
            out.push_str(&monomial(m));
        } else {
            out.push_str(&format!("{} {}", magnitude(&mag), monomial(m)));
        }
    }
    out
}

fn with_power(symbol: &str, coeffs: Vec<(i32, &DiffPoly)>) -> String {
    if coeffs.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in coeffs.into_iter().enumerate() {
        let body = poly(c);
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) if c.len() == 1 => (true, rest.to_string()),
            _ => (false, body),
        };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let power = match k {
            0 => String::new(),
            1 => symbol.to_string(),
            _ => format!("{symbol}^{{{k}}}"),
        };
        if k == 0 {
            out.push_str(&if c.len() > 1 && i > 0 { format!("\\left({body}\\right)") } else { body });
        } else if body == "1" {
            out.push_str(&power);
        } else if c.len() == 1 {
            out.push_str(&format!("{body} {power}"));
        } else {
            out.push_str(&format!("\\left({body}\\right) {power}"));
        }
    }
    out
}

pub fn operator<R: Rule>(op: &Operator<R>) -> String {
    let symbol = if R::SYMBOL == "D" { "\\partial" } else { "\\xi" };
    let body = with_power(symbol, op.coeffs().rev().collect());
    match op.floor() {
        Some(f) => format!("{body} + O\\left({symbol}^{{{}}}\\right)", f - 1),
        None => body,
    }
}

pub fn local(op: &LocalOperator) -> String {
    with_power("\\partial", op.coeffs().rev().map(|(k, c)| (k as i32, c)).collect())
}

pub fn functional(f: &Functional) -> String {
    format!("\\int {} \\, dx", poly(f.integrand()))
}

pub fn matrix(m: &PoissonMatrix) -> String {
    let name = |i: u32| match m.shape().field(i) {
        Some(g) => generator(g),
        None => format!("s_{{{i}}}"),
    };
    let mut out = String::from("\\begin{aligned}\n");
    for (&(i, j), d) in m.entries() {
        out.push_str(&format!("  \\{{{}, {}\\}} &= {} \\\\\n", name(i), name(j), local(d)));
    }
    out.push_str("\\end{aligned}");
    out
}
