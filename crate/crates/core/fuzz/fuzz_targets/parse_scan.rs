#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_scan, parse_scan};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_scan(text) {
        assert_eq!(parse_scan(&emit_scan(&rows)).unwrap(), rows);
    }
});
