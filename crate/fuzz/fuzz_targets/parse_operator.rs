#![no_main]

use laxalg::psido::Quantum;
use laxalg::syntax::parse_operator;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(op) = parse_operator::<Quantum>(text, 4) {
        // printing can exceed the parser limits (u^40*u^40), so only check what parses
        if let Ok(again) = parse_operator::<Quantum>(&op.to_string(), 4) {
            assert!(again.agrees_with(&op));
        }
    }
});
