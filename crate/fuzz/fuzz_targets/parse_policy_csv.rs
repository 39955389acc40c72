//! Policy CSV files are read back from earlier runs or written by hand;
//! the reader must reject arbitrary bytes with an error, never a panic, and
//! every accepted sample must be a finite (t, x) pair.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(samples) = crp_core::format::parse_policy_csv(text) {
        assert!(!samples.is_empty(), "an accepted file must yield samples");
        assert!(
            samples.iter().all(|&(t, x)| t.is_finite() && x.is_finite()),
            "accepted samples must be finite"
        );
    }
});
