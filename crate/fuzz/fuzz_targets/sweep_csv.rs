#![no_main]

use gll_core::formats::{sweep_from_csv, sweep_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = sweep_from_csv(text) {
        let again = sweep_from_csv(&sweep_to_csv(&rows).unwrap()).unwrap();
        assert_eq!(again.len(), rows.len());
    }
});
