#![no_main]

use gradekit::tool_schema::{canonical_serialize, parse_plan};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(validated) = parse_plan(text) {
            // Anything that parses must re-serialize and re-parse to itself.
            let canonical = canonical_serialize(&validated.plan);
            let again = parse_plan(&canonical).expect("canonical form parses");
            assert_eq!(again.plan, validated.plan);
        }
    }
});
