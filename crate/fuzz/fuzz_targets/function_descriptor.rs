#![no_main]

use gll_core::formats::parse_function;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Anything else is taken as a file path; keep the fuzzer off the filesystem.
    if text.contains(':') || text.trim() == "zero" {
        let _ = parse_function(text);
    }
});
