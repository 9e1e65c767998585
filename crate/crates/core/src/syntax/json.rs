//! Loss-free JSON encodings. Rationals travel as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::error::ParseError;
use crate::diffalg::{DiffPoly, Functional, Generator, LocalOperator, Monomial, Rational, Var};
use crate::error::{Error, Result};
use crate::gdbracket::{LaxShape, PoissonMatrix};
use crate::psido::{Operator, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub field: String,
    pub deriv: u32,
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<FactorJson>,
    pub num: String,
    pub den: String,
}

pub type PolyJson = Vec<TermJson>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub power: i32,
    pub coeff: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub symbol: String,
    pub floor: Option<i32>,
    pub terms: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotJson {
    pub slot: u32,
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeJson {
    pub order: i32,
    pub floor: Option<i32>,
    pub reduced: bool,
    pub slots: Vec<SlotJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: u32,
    pub j: u32,
    pub operator: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub shape: ShapeJson,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalJson {
    pub integrand: PolyJson,
}

fn invalid(message: impl Into<String>) -> Error {
    ParseError::new(0, message).into()
}

pub fn poly_json(p: &DiffPoly) -> PolyJson {
    p.terms()
        .map(|(m, c)| TermJson {
            monomial: m
                .factors()
                .iter()
                .map(|(v, e)| FactorJson {
                    field: v.gen.to_string(),
                    deriv: v.order,
                    exp: *e,
                })
                .collect(),
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        })
        .collect()
}

pub fn poly_from_json(terms: &PolyJson) -> Result<DiffPoly> {
    let mut out = DiffPoly::zero();
    for t in terms {
        let num: BigInt = t.num.parse().map_err(|_| invalid(format!("bad numerator {:?}", t.num)))?;
        let den: BigInt = t.den.parse().map_err(|_| invalid(format!("bad denominator {:?}", t.den)))?;
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        let mut factors = Vec::new();
        for f in &t.monomial {
            if f.exp == 0 {
                return Err(invalid(format!("zero exponent on {}", f.field)));
            }
            let g = super::parse_field(&f.field)?;
            factors.push((Var::new(g, f.deriv), f.exp));
        }
        out.add_term(Monomial::from_factors(factors), Rational::new(num, den));
    }
    Ok(out)
}

fn coeffs_json<'a>(coeffs: impl Iterator<Item = (i32, &'a DiffPoly)>) -> Vec<CoeffJson> {
    coeffs
        .map(|(power, c)| CoeffJson {
            power,
            coeff: poly_json(c),
        })
        .collect()
}

pub fn operator_json<R: Rule>(op: &Operator<R>) -> OperatorJson {
    OperatorJson {
        symbol: R::SYMBOL.to_string(),
        floor: op.floor(),
        terms: coeffs_json(op.coeffs().rev()),
    }
}

pub fn operator_from_json<R: Rule>(json: &OperatorJson) -> Result<Operator<R>> {
    if json.symbol != R::SYMBOL {
        return Err(invalid(format!("expected symbol {}, found {}", R::SYMBOL, json.symbol)));
    }
    let mut coeffs: BTreeMap<i32, DiffPoly> = BTreeMap::new();
    for t in &json.terms {
        match json.floor {
            Some(f) if t.power < f => return Err(invalid(format!("power {} below the floor {f}", t.power))),
            None if t.power < 0 => return Err(invalid(format!("negative power {} in an exact operator", t.power))),
            _ => {}
        }
        *coeffs.entry(t.power).or_default() += poly_from_json(&t.coeff)?;
    }
    Ok(Operator::from_coeffs(coeffs, json.floor))
}

pub fn local_json(op: &LocalOperator) -> Vec<CoeffJson> {
    coeffs_json(op.coeffs().rev().map(|(k, c)| (k as i32, c)))
}

pub fn local_from_json(terms: &[CoeffJson]) -> Result<LocalOperator> {
    let mut out = LocalOperator::zero();
    for t in terms {
        let k = u32::try_from(t.power).map_err(|_| invalid(format!("negative power {} in a local operator", t.power)))?;
        out.add_coeff(k, poly_from_json(&t.coeff)?);
    }
    Ok(out)
}

pub fn shape_json(shape: &LaxShape) -> ShapeJson {
    ShapeJson {
        order: shape.order(),
        floor: shape.floor(),
        reduced: shape.is_reduced(),
        slots: shape
            .fields()
            .map(|(slot, g)| SlotJson {
                slot,
                field: g.to_string(),
            })
            .collect(),
    }
}

pub fn shape_from_json(json: &ShapeJson) -> Result<LaxShape> {
    let count = match json.floor {
        None => json.order,
        Some(f) => json.order.saturating_sub(f),
    };
    if !(1..=4096).contains(&count) {
        return Err(invalid(format!("unsupported slot count {count}")));
    }
    let mut fields: Vec<Option<Generator>> = vec![None; count as usize];
    for s in &json.slots {
        let cell = (s.slot as usize)
            .checked_sub(1)
            .and_then(|i| fields.get_mut(i))
            .ok_or_else(|| invalid(format!("slot {} out of range", s.slot)))?;
        if cell.is_some() {
            return Err(invalid(format!("slot {} given twice", s.slot)));
        }
        *cell = Some(super::parse_field(&s.field)?);
    }
    if json.reduced && fields[0].is_some() {
        return Err(invalid("a reduced shape has no field in slot 1"));
    }
    let shape = LaxShape::new(json.order, json.floor, fields)?;
    if json.reduced {
        shape.reduced()
    } else {
        Ok(shape)
    }
}

pub fn matrix_json(m: &PoissonMatrix) -> MatrixJson {
    MatrixJson {
        shape: shape_json(m.shape()),
        entries: m
            .entries()
            .iter()
            .map(|(&(i, j), d)| EntryJson {
                i,
                j,
                operator: local_json(d),
            })
            .collect(),
    }
}

pub fn matrix_from_json(json: &MatrixJson) -> Result<PoissonMatrix> {
    let shape = shape_from_json(&json.shape)?;
    let mut entries = BTreeMap::new();
    for e in &json.entries {
        if e.i == 0 || e.j == 0 || e.i > shape.count() || e.j > shape.count() {
            return Err(invalid(format!("entry ({}, {}) out of range", e.i, e.j)));
        }
        if entries.insert((e.i, e.j), local_from_json(&e.operator)?).is_some() {
            return Err(invalid(format!("entry ({}, {}) given twice", e.i, e.j)));
        }
    }
    Ok(PoissonMatrix::new(&shape, entries))
}

pub fn functional_json(f: &Functional) -> FunctionalJson {
    FunctionalJson {
        integrand: poly_json(f.integrand()),
    }
}

pub fn functional_from_json(json: &FunctionalJson) -> Result<Functional> {
    Ok(Functional::new(poly_from_json(&json.integrand)?))
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| ParseError::new(e.column(), e.to_string()).into())
}

/// Reads a Poisson matrix written by [`matrix_json`].
pub fn decode_matrix(text: &str) -> Result<PoissonMatrix> {
    matrix_from_json(&decode(text)?)
}

/// Reads an operator written by [`operator_json`].
pub fn decode_operator<R: Rule>(text: &str) -> Result<Operator<R>> {
    operator_from_json(&decode(text)?)
}

/// Reads a functional written by [`functional_json`].
pub fn decode_functional(text: &str) -> Result<Functional> {
    functional_from_json(&decode(text)?)
}
