#![no_main]

use laxalg::syntax::parse_functional;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_functional(text) {
        if let Ok(again) = parse_functional(&f.to_string()) {
            assert_eq!(again, f);
        }
    }
});
