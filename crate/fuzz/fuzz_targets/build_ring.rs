#![no_main]

use libfuzzer_sys::fuzz_target;
use sos_core::{CoordinateRing, VarietySpec};

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = VarietySpec::from_json_slice(data) else {
        return;
    };
    // keep construction cheap
    match spec.expected_dims() {
        Ok((d1, d2)) if d1 <= 64 && d2 <= 512 => {}
        _ => return,
    }
    if let Ok(ring) = CoordinateRing::build(&spec) {
        let (d1, d2) = spec.expected_dims().unwrap();
        assert_eq!((ring.dim1(), ring.dim2()), (d1, d2));
        for a in 0..ring.dim1() {
            for b in a..ring.dim1() {
                assert_eq!(ring.mult_dense(a, b), ring.mult_dense(b, a));
            }
        }
    }
});
