#![no_main]

use gradekit::llm_io::{parse_model_output, Role};
use gradekit::tool_schema::Tool;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        for role in [Role::Teacher, Role::Student] {
            for tool in Tool::ALL {
                let _ = parse_model_output(text, role, tool);
            }
        }
    }
});
