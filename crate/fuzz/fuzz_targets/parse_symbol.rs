#![no_main]

use laxalg::classical::Classical;
use laxalg::syntax::parse_operator;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_operator::<Classical>(text, 4) {
        // printing can exceed the parser limits (u^40*u^40), so only check what parses
        if let Ok(again) = parse_operator::<Classical>(&s.to_string(), 4) {
            assert!(again.agrees_with(&s));
        }
    }
});
