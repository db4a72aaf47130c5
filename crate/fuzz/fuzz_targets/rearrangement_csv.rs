#![no_main]

use gll_core::formats::{rearrangement_from_csv, rearrangement_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = rearrangement_from_csv(text) {
        let again = rearrangement_from_csv(&rearrangement_to_csv(&f).unwrap()).unwrap();
        assert_eq!(again.samples(), f.samples());
    }
});
