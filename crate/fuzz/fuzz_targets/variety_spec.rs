#![no_main]

use libfuzzer_sys::fuzz_target;
use sos_core::VarietySpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = VarietySpec::from_json_slice(data) {
        // accepted specs round-trip and have computable dimensions
        let again = VarietySpec::from_json_str(&spec.to_json()).expect("round trip");
        assert_eq!(again, spec);
        spec.expected_dims().expect("validated spec has dimensions");
    }
});
