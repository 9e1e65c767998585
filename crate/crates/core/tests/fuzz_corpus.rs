//! Replays the checked-in fuzz seeds through the same round-trips the fuzz
//! targets assert, so a stale corpus or a regression shows up in `cargo test`.

use std::fs;
use std::path::PathBuf;

use laxalg::classical::Classical;
use laxalg::psido::Quantum;
use laxalg::syntax::json::{
    decode_functional, decode_matrix, decode_operator, functional_json, matrix_json, operator_json,
};
use laxalg::syntax::{parse_functional, parse_operator, parse_poly};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn operator_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("parse_operator") {
        if let Ok(op) = parse_operator::<Quantum>(&text, 4) {
            assert!(parse_operator::<Quantum>(&op.to_string(), 4).unwrap().agrees_with(&op), "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 5);
    for (name, text) in seeds("parse_symbol") {
        if let Ok(s) = parse_operator::<Classical>(&text, 4) {
            assert!(parse_operator::<Classical>(&s.to_string(), 4).unwrap().agrees_with(&s), "{name}");
        }
    }
    assert!(parse_operator::<Classical>("Xi + D", 4).is_err());
}

#[test]
fn polynomial_and_functional_seeds() {
    for (name, text) in seeds("parse_poly") {
        let p = parse_poly(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{name}");
    }
    for (name, text) in seeds("parse_functional") {
        let f = parse_functional(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_functional(&f.to_string()).unwrap(), f, "{name}");
    }
}

#[test]
fn json_seeds() {
    for (name, text) in seeds("decode_matrix") {
        let m = decode_matrix(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(decode_matrix(&serde_json::to_string(&matrix_json(&m)).unwrap()).unwrap(), m);
    }
    for (name, text) in seeds("decode_operator") {
        match (decode_operator::<Quantum>(&text), decode_operator::<Classical>(&text)) {
            (Ok(op), Err(_)) => {
                assert_eq!(decode_operator::<Quantum>(&serde_json::to_string(&operator_json(&op)).unwrap()).unwrap(), op)
            }
            (Err(_), Ok(s)) => {
                assert_eq!(decode_operator::<Classical>(&serde_json::to_string(&operator_json(&s)).unwrap()).unwrap(), s)
            }
            other => panic!("{name}: {other:?}"),
        }
    }
    let mut rejected = 0;
    for (_, text) in seeds("decode_functional") {
        match decode_functional(&text) {
            Ok(f) => assert_eq!(decode_functional(&serde_json::to_string(&functional_json(&f)).unwrap()).unwrap(), f),
            Err(_) => rejected += 1,
        }
    }
    assert_eq!(rejected, 1);
}
