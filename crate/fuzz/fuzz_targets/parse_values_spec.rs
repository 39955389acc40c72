//! Sweep value lists arrive as CLI strings (`start:step:stop`, comma lists,
//! or single numbers). The expansion is capped, so no input may panic or
//! allocate without bound.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = crp_core::format::parse_values_spec(text) {
        assert!(!values.is_empty(), "an accepted spec must yield values");
        assert!(values.iter().all(|v| v.is_finite()), "accepted values must be finite");
    }
});
