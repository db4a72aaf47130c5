#![no_main]

use gll_core::formats::{sampled_from_csv, sampled_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = sampled_from_csv(text) {
        let again = sampled_from_csv(&sampled_to_csv(&s).unwrap()).unwrap();
        assert_eq!(again.values.len(), s.values.len());
    }
});
