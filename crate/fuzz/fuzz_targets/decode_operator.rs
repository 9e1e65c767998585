#![no_main]

use laxalg::classical::Classical;
use laxalg::psido::Quantum;
use laxalg::syntax::json::{decode_operator, operator_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(op) = decode_operator::<Quantum>(text) {
        let encoded = serde_json::to_string(&operator_json(&op)).unwrap();
        assert_eq!(decode_operator::<Quantum>(&encoded).expect("encoded operator decodes"), op);
    }
    let _ = decode_operator::<Classical>(text);
});
