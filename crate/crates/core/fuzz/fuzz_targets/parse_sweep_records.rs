#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_sweep_records, parse_sweep_records};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = parse_sweep_records(text) {
        assert_eq!(parse_sweep_records(&emit_sweep_records(&records)).unwrap(), records);
    }
});
