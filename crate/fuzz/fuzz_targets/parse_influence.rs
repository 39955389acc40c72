//! The influence-function notation `family(a, b)` appears inside instance
//! documents; parsing arbitrary text must never panic, and accepted values
//! must round-trip through their display form.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = crp_core::format::parse_influence(text) {
        let again = crp_core::format::parse_influence(&f.to_string())
            .expect("displayed influence function must reparse");
        assert_eq!(f, again, "round trip changed the influence function");
    }
});
