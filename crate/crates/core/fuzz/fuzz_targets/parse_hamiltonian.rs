#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_hamiltonian, parse_hamiltonian};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = parse_hamiltonian(text, "fuzz") {
        let again = parse_hamiltonian(&emit_hamiltonian(&h), "fuzz").expect("emitted Hamiltonian parses");
        assert_eq!(again.terms(), h.terms());
    }
});
