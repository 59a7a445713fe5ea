use photonic_vqe::grouping::{group_hamiltonian, group_strings, CommutativityMode, GroupKind};
use photonic_vqe::measurement::compile_settings;
use photonic_vqe::pauli::{heh_plus_strings, Hamiltonian, PauliString};

fn names(members: &[PauliString]) -> Vec<String> {
    let mut v: Vec<String> = members.iter().map(|m| m.to_string()).collect();
    v.sort();
    v
}

fn partition(strings: &[PauliString], mode: CommutativityMode) -> Vec<(Vec<String>, GroupKind)> {
    let mut groups: Vec<_> = group_strings(strings, mode)
        .unwrap()
        .into_iter()
        .map(|g| (names(&g.members), g.kind))
        .collect();
    groups.sort();
    groups
}

fn expected(sets: &[(&[&str], GroupKind)]) -> Vec<(Vec<String>, GroupKind)> {
    let mut v: Vec<_> = sets
        .iter()
        .map(|(s, k)| {
            let mut n: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            n.sort();
            (n, *k)
        })
        .collect();
    v.sort();
    v
}

#[test]
fn heh_plus_partitions() {
    let strings = heh_plus_strings();
    let sep = GroupKind::Separable;
    assert_eq!(
        partition(&strings, CommutativityMode::Qwc),
        expected(&[
            (&["II", "IZ", "ZI", "ZZ"], sep),
            (&["IX", "ZX"], sep),
            (&["XI", "XZ"], sep),
            (&["XX"], sep),
        ])
    );
    assert_eq!(
        partition(&strings, CommutativityMode::GcBell),
        expected(&[
            (&["II", "ZZ", "XX"], GroupKind::Bell),
            (&["IX", "ZX", "ZI"], sep),
            (&["XI", "XZ", "IZ"], sep),
        ])
    );
}

#[test]
fn heisenberg_counts() {
    let h = Hamiltonian::heisenberg();
    let bell = group_hamiltonian(&h, CommutativityMode::GcBell).unwrap();
    assert_eq!(bell.len(), 1);
    assert_eq!(bell[0].kind, GroupKind::Bell);
    assert_eq!(group_hamiltonian(&h, CommutativityMode::Qwc).unwrap().len(), 3);
}

#[test]
fn every_group_compiles_to_an_exact_setting() {
    for mode in [CommutativityMode::Qwc, CommutativityMode::GcBell] {
        let groups = group_strings(&heh_plus_strings(), mode).unwrap();
        for (g, s) in groups.iter().zip(compile_settings(&groups).unwrap()) {
            g.validate().unwrap();
            for m in &g.members {
                assert!(s.reconstruction_error(m).unwrap() < 1e-12, "{m}");
            }
        }
    }
}
