#![no_main]

use gll_core::InequalityReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = InequalityReport::from_json(text) {
        let _ = report.to_csv();
        let _ = report.to_json();
    }
});
