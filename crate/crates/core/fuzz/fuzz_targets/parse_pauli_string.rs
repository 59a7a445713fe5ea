#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::pauli::PauliString;

fuzz_target!(|text: &str| {
    if let Ok(p) = PauliString::parse(text) {
        assert_eq!(p.qubit_count(), p.ops().len());
        assert_eq!(PauliString::parse(&p.to_string()), Ok(p));
    }
});
