//! Recursive-descent parser for operators, differential polynomials and
//! functionals.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | postfix
//! postfix := atom "'"* ('^' int)?
//! atom    := number | field | 'D' | 'Xi' | '(' expr ')'
//!          | 'inv' '(' expr ')' | 'int' '(' expr ')'
//! int     := '-'? digits | '(' '-'? digits ')'
//! ```
//!
//! Values are evaluated while parsing. `D^-k` and `inv(...)` are truncated
//! at `-depth`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::error::{ModeError, ParseError};
use crate::diffalg::{DiffPoly, Functional, Generator, Rational};
use crate::error::{Error, Result};
use crate::psido::{Operator, Rule};

const MAX_NESTING: usize = 64;
const MAX_EXPONENT: u32 = 64;
const MAX_PRIMES: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Prime,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Prime => "'''".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Num(digits.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(ParseError::new(i + 1, "letters may not follow an index"));
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '\'' => Tok::Prime,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError::new(col, format!("unexpected character {c:?}"))),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// The value of a subexpression.
#[derive(Clone, Debug)]
enum Value<R: Rule> {
    Num(Rational),
    Poly(DiffPoly),
    Op(Operator<R>),
    Func(Functional),
}

impl<R: Rule> Value<R> {
    fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Poly(_) => "polynomial",
            Value::Op(_) => "operator",
            Value::Func(_) => "functional",
        }
    }

    fn into_poly(self) -> Option<DiffPoly> {
        match self {
            Value::Num(c) => Some(DiffPoly::constant(c)),
            Value::Poly(p) => Some(p),
            _ => None,
        }
    }

    fn into_op(self) -> Option<Operator<R>> {
        match self {
            Value::Op(op) => Some(op),
            other => other.into_poly().map(Operator::constant),
        }
    }
}

struct Parser<R: Rule> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    floor: i32,
    nesting: usize,
    _rule: std::marker::PhantomData<R>,
}

fn quantum<R: Rule>() -> bool {
    R::SYMBOL == "D"
}

impl<R: Rule> Parser<R> {
    fn new(text: &str, depth: u32) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            floor: -(depth.min(i32::MAX as u32) as i32),
            nesting: 0,
            _rule: std::marker::PhantomData,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&str]) -> Error {
        ParseError::expecting(self.column(), expected, format!("unexpected {}", self.peek().describe())).into()
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&[name]))
        }
    }

    fn finish(&mut self) -> Result<Value<R>> {
        let v = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.fail(&["'+'", "'-'", "'*'", "'/'", "end of input"]));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Value<R>> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(ParseError::new(self.column(), "expression nested too deeply").into());
        }
        let mut acc = self.term()?;
        loop {
            let col = self.column();
            let sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            acc = add(acc, if sign < 0 { neg(rhs) } else { rhs }, col)?;
        }
        self.nesting -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value<R>> {
        let mut acc = self.unary()?;
        loop {
            let col = self.column();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs, col)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = div(acc, rhs, col)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value<R>> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(neg(self.nested(Self::unary)?))
            }
            Tok::Plus => {
                self.bump();
                self.nested(Self::unary)
            }
            _ => self.postfix(),
        }
    }

    fn nested(&mut self, f: fn(&mut Self) -> Result<Value<R>>) -> Result<Value<R>> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(ParseError::new(self.column(), "expression nested too deeply").into());
        }
        let v = f(self)?;
        self.nesting -= 1;
        Ok(v)
    }

    fn postfix(&mut self) -> Result<Value<R>> {
        let mut v = self.atom()?;
        let mut primes = 0;
        while *self.peek() == Tok::Prime {
            let col = self.column();
            self.bump();
            primes += 1;
            if primes > MAX_PRIMES {
                return Err(ParseError::new(col, "too many primes").into());
            }
            v = match v {
                Value::Num(_) => Value::Num(Rational::zero()),
                Value::Poly(p) => Value::Poly(p.derivative()),
                other => {
                    return Err(ParseError::new(col, format!("cannot differentiate a {}", other.kind())).into())
                }
            };
        }
        if *self.peek() == Tok::Caret {
            let col = self.column();
            self.bump();
            let k = self.exponent()?;
            v = power(v, k, col, self.floor)?;
        }
        Ok(v)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let col = self.column();
        let k = match self.bump().0 {
            Tok::Num(n) => n,
            _ => {
                self.pos -= 1;
                return Err(self.fail(&["integer exponent"]));
            }
        };
        if paren {
            self.expect(Tok::RParen, "')'")?;
        }
        let k = k
            .to_i64()
            .filter(|k| *k <= MAX_EXPONENT as i64)
            .ok_or_else(|| ParseError::new(col, format!("exponent exceeds {MAX_EXPONENT}")))?;
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> Result<Value<R>> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Value::Num(Rational::from_integer(n)))
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "D" | "Xi" => {
                        if (name == "D") != quantum::<R>() {
                            let mode = if quantum::<R>() { "quantum" } else { "classical" };
                            return Err(ModeError::new(col, name, mode).into());
                        }
                        Ok(Value::Op(Operator::power(1, None)))
                    }
                    "inv" => {
                        let v = self.call()?;
                        let op = v
                            .into_op()
                            .ok_or_else(|| ParseError::new(col, "inv expects an operator"))?;
                        Ok(Value::Op(op.inverse(self.floor)?))
                    }
                    "int" => {
                        let v = self.call()?;
                        let p = v
                            .into_poly()
                            .ok_or_else(|| ParseError::new(col, "int expects a differential polynomial"))?;
                        Ok(Value::Func(Functional::new(p)))
                    }
                    _ => {
                        let g = field(&name).ok_or_else(|| ParseError::new(col, format!("invalid field name {name:?}")))?;
                        Ok(Value::Poly(DiffPoly::gen(g)))
                    }
                }
            }
            _ => Err(self.fail(&["number", "field", R::SYMBOL, "'('", "'-'", "inv", "int"])),
        }
    }

    fn call(&mut self) -> Result<Value<R>> {
        self.expect(Tok::LParen, "'('")?;
        let v = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(v)
    }
}

/// `u`, `u2`, `phi13`; names starting with `_` are reserved.
fn field(name: &str) -> Option<Generator> {
    if name.starts_with('_') {
        return None;
    }
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (base, digits) = name.split_at(split);
    let index = if digits.is_empty() {
        None
    } else {
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        Some(digits.parse().ok()?)
    };
    Generator::try_new(base, index).ok()
}

fn type_error<R: Rule>(op: &str, a: &Value<R>, b: &Value<R>, col: usize) -> Error {
    ParseError::new(col, format!("cannot {op} a {} and a {}", a.kind(), b.kind())).into()
}

fn neg<R: Rule>(v: Value<R>) -> Value<R> {
    match v {
        Value::Num(c) => Value::Num(-c),
        Value::Poly(p) => Value::Poly(-p),
        Value::Op(op) => Value::Op(op.neg()),
        Value::Func(f) => Value::Func(f.neg()),
    }
}

fn add<R: Rule>(a: Value<R>, b: Value<R>, col: usize) -> Result<Value<R>> {
    Ok(match (a, b) {
        (Value::Num(x), Value::Num(y)) => Value::Num(x + y),
        (Value::Func(f), Value::Func(g)) => Value::Func(f.add(&g)),
        (a @ Value::Func(_), b) | (a, b @ Value::Func(_)) => return Err(type_error("add", &a, &b, col)),
        (a @ Value::Op(_), b) | (a, b @ Value::Op(_)) => {
            Value::Op(a.into_op().expect("operand").add(&b.into_op().expect("operand")))
        }
        (a, b) => Value::Poly(a.into_poly().expect("operand") + b.into_poly().expect("operand")),
    })
}

fn mul<R: Rule>(a: Value<R>, b: Value<R>, col: usize) -> Result<Value<R>> {
    Ok(match (a, b) {
        (Value::Num(x), Value::Num(y)) => Value::Num(x * y),
        (Value::Num(c), Value::Func(f)) | (Value::Func(f), Value::Num(c)) => Value::Func(f.scale(&c)),
        (a @ Value::Func(_), b) | (a, b @ Value::Func(_)) => return Err(type_error("multiply", &a, &b, col)),
        (a @ Value::Op(_), b) | (a, b @ Value::Op(_)) => {
            Value::Op(a.into_op().expect("operand").mul(&b.into_op().expect("operand")))
        }
        (a, b) => Value::Poly(&a.into_poly().expect("operand") * &b.into_poly().expect("operand")),
    })
}

fn div<R: Rule>(a: Value<R>, b: Value<R>, col: usize) -> Result<Value<R>> {
    match b {
        Value::Num(c) if !c.is_zero() => mul(a, Value::Num(c.recip()), col),
        Value::Num(_) => Err(ParseError::new(col, "division by zero").into()),
        other => Err(ParseError::new(col, format!("cannot divide by a {}", other.kind())).into()),
    }
}

fn power<R: Rule>(v: Value<R>, k: i64, col: usize, floor: i32) -> Result<Value<R>> {
    match v {
        Value::Num(c) if k < 0 && c.is_zero() => Err(ParseError::new(col, "division by zero").into()),
        Value::Num(c) => {
            let mut out = Rational::one();
            for _ in 0..k.unsigned_abs() {
                out *= &c;
            }
            Ok(Value::Num(if k < 0 { out.recip() } else { out }))
        }
        Value::Poly(p) if k >= 0 => Ok(Value::Poly(p.pow(k as u32))),
        Value::Op(op) if k >= 0 => Ok(Value::Op(op.pow(k as u32))),
        Value::Op(op) if op == Operator::power(1, None) => {
            let k = k as i32;
            if k < floor {
                return Err(Error::FloorTooHigh { power: k, floor });
            }
            Ok(Value::Op(Operator::power(k, Some(floor))))
        }
        Value::Op(_) => Err(ParseError::new(col, format!("negative powers apply to {} only; use inv(...)", R::SYMBOL)).into()),
        Value::Poly(_) => Err(ParseError::new(col, "negative powers of polynomials are not supported").into()),
        other => Err(ParseError::new(col, format!("cannot raise a {} to a power", other.kind())).into()),
    }
}

/// Parses an operator in the mode of `R`, truncating tails at `-depth`.
pub fn parse_operator<R: Rule>(text: &str, depth: u32) -> Result<Operator<R>> {
    let mut p = Parser::<R>::new(text, depth)?;
    let col = p.column();
    match p.finish()? {
        Value::Func(_) => Err(ParseError::new(col, "expected an operator, found a functional").into()),
        v => Ok(v.into_op().expect("operand")),
    }
}

/// Parses a differential polynomial (no `D`, `Xi`, `inv` or `int`).
pub fn parse_poly(text: &str) -> Result<DiffPoly> {
    let mut p = Parser::<crate::psido::Quantum>::new(text, 0)?;
    let col = p.column();
    match p.finish()? {
        Value::Num(c) => Ok(DiffPoly::constant(c)),
        Value::Poly(q) => Ok(q),
        other => Err(ParseError::new(col, format!("expected a differential polynomial, found a {}", other.kind())).into()),
    }
}

/// Parses `int(p)`, or a bare polynomial `p`, as the functional `∫ p`.
pub fn parse_functional(text: &str) -> Result<Functional> {
    let mut p = Parser::<crate::psido::Quantum>::new(text, 0)?;
    let col = p.column();
    match p.finish()? {
        Value::Func(f) => Ok(f),
        Value::Num(c) => Ok(Functional::new(DiffPoly::constant(c))),
        Value::Poly(q) => Ok(Functional::new(q)),
        Value::Op(_) => Err(ParseError::new(col, "expected a functional, found an operator").into()),
    }
}

/// Parses a field name such as `u2` or `phi`.
pub fn parse_field(text: &str) -> Result<Generator> {
    field(text.trim()).ok_or_else(|| Error::InvalidGenerator(text.to_string()))
}
