#![no_main]

use gradekit::dataset::{curate, ingest_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok((records, _)) = ingest_text(text) {
            if records.len() <= 256 {
                let _ = curate(&records);
            }
        }
    }
});
