#![no_main]

use laxalg::syntax::json::{decode_matrix, matrix_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = decode_matrix(text) {
        let encoded = serde_json::to_string(&matrix_json(&m)).unwrap();
        assert_eq!(decode_matrix(&encoded).expect("encoded matrix decodes"), m);
    }
});
