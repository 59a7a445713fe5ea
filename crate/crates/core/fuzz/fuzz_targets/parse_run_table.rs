#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_run_table, parse_run_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(runs) = parse_run_table(text) {
        assert_eq!(parse_run_table(&emit_run_table(&runs)).unwrap(), runs);
    }
});
