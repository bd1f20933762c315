#![no_main]

use libfuzzer_sys::fuzz_target;
use sos_core::harness::CertificateInstance;
use sos_core::{CoordinateRing, VarietySpec};

fuzz_target!(|data: &[u8]| {
    let Ok(inst) = CertificateInstance::from_json_slice(data) else {
        return;
    };
    let ring = CoordinateRing::build(&VarietySpec::Scroll { heights: vec![2, 2] }).expect("ring");
    if inst.l.len() > 8 {
        return;
    }
    let _ = inst.verify(&ring);
});
