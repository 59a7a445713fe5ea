#![no_main]

use libfuzzer_sys::fuzz_target;
use photonic_vqe::formats::{emit_hamiltonian_table, parse_hamiltonian_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = parse_hamiltonian_table(text) {
        let again = parse_hamiltonian_table(&emit_hamiltonian_table(&table)).expect("emitted table parses");
        assert_eq!(again, table);
        for row in 0..table.rows.len() {
            let _ = table.hamiltonian(row);
        }
    }
});
