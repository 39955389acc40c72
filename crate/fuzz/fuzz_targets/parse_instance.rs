//! Instance documents come from user-edited files, so the parser must reject
//! arbitrary bytes with an error, never a panic. A successful parse must also
//! survive the serialize/reparse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = crp_core::format::parse_instance(text) {
        let rendered = crp_core::format::serialize_instance(&inst);
        let again = crp_core::format::parse_instance(&rendered)
            .expect("serialized instance must reparse");
        assert_eq!(inst, again, "round trip changed the instance");
    }
});
