#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::parse_shots;
use photonic_vqe::measurement::Shots;

fuzz_target!(|text: &str| {
    if let Ok(shots) = parse_shots(text) {
        assert_ne!(shots, Shots::Count(0));
        assert_eq!(parse_shots(&shots.to_string()), Ok(shots));
    }
});
