#![no_main]

use gradekit::engine::{decode_ppm, encode_ppm};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode_ppm(data) {
        // Cap re-encode work; decode alone must already be total.
        if img.pixel_count() <= 1 << 16 {
            let bytes = encode_ppm(&img);
            decode_ppm(&bytes).expect("re-encoded image decodes");
        }
    }
});
