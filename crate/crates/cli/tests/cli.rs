use std::process::{Command, Output};

use laxalg::gdbracket::{poisson_matrix, LaxShape};
use laxalg::psido::Quantum;
use laxalg::syntax::json::decode_matrix;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxalg"))
        .args(args)
        .env_remove("LAXALG_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn theorem1_passes() {
    let o = run(&["verify", "theorem1", "--A", "D+a", "--B", "D+b", "--samples", "10", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS: "), "{text}");
    assert!(text.contains("(12/12 exact)"));
    assert!(text.contains("window: exact (differential)"));
    assert!(text.contains("seed: 7"));
}

#[test]
fn reduced_matrix_is_virasoro() {
    let o = run(&["matrix", "--lax", "D^2+u2", "--reduced"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("{u2, u2} = 1/2*D^3 + 2*u2*D + u2'\n"));
}

#[test]
fn bracket_of_cubic_and_kinetic_terms() {
    let o = run(&["bracket", "--lax", "D+a", "--F", "int(a^3)", "--G", "int(a'^2)"]);
    assert_eq!(stdout(&o).lines().next(), Some("int(6*a'^3)"));
}

#[test]
fn inverse_to_depth() {
    let o = run(&["inv", "D + a", "--depth", "4"]);
    let text = stdout(&o);
    assert!(text.starts_with("D^-1 - a*D^-2 + (a^2 + a')*D^-3"), "{text}");
    assert!(text.contains("certified down to D^-4"));
}

#[test]
fn parse_errors_exit_with_two() {
    let o = run(&["mul", "D^2 +", "D"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("column 6"), "{err}");
    let o = run(&["mul", "Xi", "D"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("mode error"));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn power_map_needs_classical_mode() {
    assert_eq!(run(&["verify", "power"]).status.code(), Some(2));
    let o = run(&["verify", "power", "--classical", "--samples", "1"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    assert!(stdout(&o).contains("observed induced = 2 * direct"));
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "jacobi", "--lax", "D+a", "--samples", "3", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_matrix_reloads_exactly() {
    let o = run(&["matrix", "--lax", "D^3+u1*D^2+u2*D+u3", "--format", "json"]);
    let m = decode_matrix(&stdout(&o)).unwrap();
    assert_eq!(m, poisson_matrix::<Quantum>(&LaxShape::kdv(3, "u").unwrap()).unwrap());
}

#[test]
fn format_from_environment_and_output_file() {
    let o = Command::new(env!("CARGO_BIN_EXE_laxalg"))
        .args(["mul", "D", "u"])
        .env("LAXALG_FORMAT", "latex")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "u \\partial + u'");

    let dir = std::env::temp_dir().join(format!("laxalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = run(&["verify", "kw", "--n", "2", "--samples", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn classical_mode_commutes() {
    let o = run(&["mul", "Xi", "u", "--classical"]);
    assert_eq!(stdout(&o).lines().next(), Some("u*Xi"));
    let o = run(&["verify", "theorem3", "--case", "inverse", "--floor", "-5", "--samples", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn reduce_gradient_solves_the_constraint() {
    let o = run(&["reduce-gradient", "--lax", "D^2+u2", "--component", "2=x"]);
    assert_eq!(stdout(&o).lines().next(), Some("x1 = 1/2*x'"));
    let o = run(&["reduce-gradient", "--lax", "D^2+u1*D+u2", "--component", "2=x"]);
    assert_eq!(o.status.code(), Some(2));
}
