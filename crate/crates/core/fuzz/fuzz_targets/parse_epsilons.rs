#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_epsilons, parse_epsilons};

fuzz_target!(|text: &str| {
    if let Ok(grid) = parse_epsilons(text) {
        assert!(grid.iter().all(|e| e.is_finite() && *e >= 0.0));
        assert_eq!(parse_epsilons(&emit_epsilons(&grid)), Ok(grid));
    }
});
