use std::collections::BTreeMap;

use laxalg::diffalg::{DiffPoly, Functional};
use laxalg::gdbracket::{OneForm, PoissonMatrix};
use laxalg::psido::{Operator, Rule};
use laxalg::syntax::{json, latex};
use laxalg::Report;
use serde_json::{json, Value};

use crate::Format;

pub struct Output {
    pub body: String,
    /// `Some` for verifications; decides the exit code.
    pub passed: Option<bool>,
}

impl Output {
    fn plain(body: String) -> Self {
        Output { body, passed: None }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

fn operator_window<R: Rule>(op: &Operator<R>) -> String {
    match op.floor() {
        None => "exact".into(),
        Some(f) => format!("certified down to {}^{f}", R::SYMBOL),
    }
}

pub fn operator<R: Rule>(op: &Operator<R>, format: Format) -> Output {
    Output::plain(match format {
        Format::Text => format!("{op}\n  window: {}", operator_window(op)),
        Format::Json => pretty(&json!({
            "operator": json::operator_json(op),
            "window": operator_window(op),
        })),
        Format::Latex => latex::operator(op),
    })
}

pub fn functional(f: &Functional, window: &str, format: Format) -> Output {
    Output::plain(match format {
        Format::Text => format!("{f}\n  window: {window}"),
        Format::Json => pretty(&json!({
            "functional": json::functional_json(f),
            "window": window,
        })),
        Format::Latex => latex::functional(f),
    })
}

pub fn matrix(m: &PoissonMatrix, window: &str, format: Format) -> Output {
    Output::plain(match format {
        Format::Text => format!("{}  window: {window}", m),
        Format::Json => serde_json::to_string_pretty(&json::matrix_json(m)).expect("json values serialise"),
        Format::Latex => latex::matrix(m),
    })
}

pub fn one_form(x: &OneForm, window: &str, format: Format) -> Output {
    let comps: &BTreeMap<u32, DiffPoly> = x.components();
    Output::plain(match format {
        Format::Text => {
            let mut s = String::new();
            for (i, c) in comps {
                s.push_str(&format!("x{i} = {c}\n"));
            }
            s.push_str(&format!("  window: {window}"));
            s
        }
        Format::Json => pretty(&json!({
            "components": comps.iter().map(|(i, c)| json!({"slot": i, "value": json::poly_json(c)})).collect::<Vec<_>>(),
            "window": window,
        })),
        Format::Latex => {
            let lines: Vec<String> = comps.iter().map(|(i, c)| format!("  x_{{{i}}} &= {} \\\\", latex::poly(c))).collect();
            format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join("\n"))
        }
    })
}

pub fn report(r: &Report, format: Format) -> Output {
    let body = match format {
        Format::Text => r.to_string(),
        Format::Json => {
            let mut v = serde_json::to_value(r).expect("json values serialise");
            v["passed"] = Value::Bool(r.passed());
            pretty(&v)
        }
        Format::Latex => {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            let mut s = format!(
                "\\textbf{{{verdict}}}: \\texttt{{{}}} ({}/{} exact)\\\\\nwindow: \\texttt{{{}}}\n\\begin{{itemize}}\n",
                escape(&r.title),
                r.passed_count(),
                r.checks.len(),
                escape(&r.window)
            );
            for c in &r.checks {
                let mark = if c.passed { "ok" } else { "FAIL" };
                s.push_str(&format!("  \\item[{mark}] {} {}\n", escape(&c.label), escape(&c.detail)));
            }
            s.push_str("\\end{itemize}");
            s
        }
    };
    Output {
        body,
        passed: Some(r.passed()),
    }
}

fn escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(c),
        }
    }
    out
}
