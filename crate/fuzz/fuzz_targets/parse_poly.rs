#![no_main]

use laxalg::syntax::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_poly(text) {
        if let Ok(again) = parse_poly(&p.to_string()) {
            assert_eq!(again, p);
        }
    }
});
