#![no_main]

use laxalg::syntax::json::{decode_functional, functional_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = decode_functional(text) {
        let encoded = serde_json::to_string(&functional_json(&f)).unwrap();
        assert_eq!(decode_functional(&encoded).expect("encoded functional decodes"), f);
    }
});
