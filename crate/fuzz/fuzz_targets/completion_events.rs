#![no_main]

use gradekit::dataset::events::completion_rate_text;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = completion_rate_text(text);
    }
});
