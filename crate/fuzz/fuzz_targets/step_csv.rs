#![no_main]

use gll_core::formats::{step_function_from_csv, step_function_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = step_function_from_csv(text) {
        let again = step_function_from_csv(&step_function_to_csv(&f).unwrap()).unwrap();
        assert_eq!(again, f);
    }
});
