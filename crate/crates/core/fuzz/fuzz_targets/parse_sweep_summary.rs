#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_sweep_summary, parse_sweep_summary};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(summary) = parse_sweep_summary(text) {
        assert_eq!(parse_sweep_summary(&emit_sweep_summary(&summary)).unwrap(), summary);
    }
});
