//! `--policy` arguments (`zero`, `max`, `const:LEVEL`, `file:PATH`) are user
//! input; parsing must never panic, and accepted specs must round-trip
//! through their display form.

#![no_main]

use crp_core::format::PolicySpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = text.parse::<PolicySpec>() {
        let again = spec
            .to_string()
            .parse::<PolicySpec>()
            .expect("displayed policy spec must reparse");
        assert_eq!(spec, again, "round trip changed the policy spec");
    }
});
