//! Commutativity tests and partitioning of Pauli strings into groups that a
//! single measurement setting can read out together.
//!
//! Grouping is greedy. Strings are placed first-fit in input order (or by
//! descending absolute weight for a Hamiltonian, ties keeping input order),
//! then a repacking pass dissolves any group whose members all fit into
//! other groups. In `GcBell` mode the strings that are diagonal in the Bell
//! basis are pulled into one Bell group first; the result is kept only if it
//! needs fewer settings than plain qubit-wise grouping.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pauli::{bell_basis, Hamiltonian, Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommutativityMode {
    /// Qubit-wise commutativity; every group has a product eigenbasis.
    Qwc,
    /// General commutativity as far as a two-qubit Bell measurement or a
    /// product measurement can realize it.
    GcBell,
}

impl CommutativityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CommutativityMode::Qwc => "QWC",
            CommutativityMode::GcBell => "GC_BELL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "QWC" => Some(Self::Qwc),
            "GC_BELL" => Some(Self::GcBell),
            _ => None,
        }
    }
}

impl fmt::Display for CommutativityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    Separable,
    Bell,
}

impl GroupKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::Separable => "SEPARABLE",
            GroupKind::Bell => "BELL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "SEPARABLE" => Some(Self::Separable),
            "BELL" => Some(Self::Bell),
            _ => None,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementGroup {
    pub members: Vec<PauliString>,
    pub mode: CommutativityMode,
    pub kind: GroupKind,
}

impl MeasurementGroup {
    /// Checks the pairwise and realizability invariants of the group.
    pub fn validate(&self) -> Result<()> {
        let first = self.members.first().ok_or(Error::EmptyInput)?;
        for m in &self.members {
            first.check_same_length(m)?;
        }
        match self.kind {
            GroupKind::Separable => {
                for (i, a) in self.members.iter().enumerate() {
                    for b in &self.members[i + 1..] {
                        if !qubit_wise_commute(a, b)? {
                            return Err(Error::UnrealizableGroup(format!(
                                "{a} and {b} do not commute qubit-wise"
                            )));
                        }
                    }
                }
            }
            GroupKind::Bell => {
                if self.mode == CommutativityMode::Qwc {
                    return Err(Error::UnrealizableGroup("Bell group in QWC mode".into()));
                }
                if let Some(m) = self.members.iter().find(|m| !is_bell_diagonal(m)) {
                    return Err(Error::UnrealizableGroup(format!(
                        "{m} is not diagonal in the Bell basis"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Single-qubit operator measured on each qubit by a separable group
    /// (`Z` where every member is the identity).
    pub fn local_bases(&self) -> Vec<Pauli> {
        let n = self.members.first().map_or(0, |m| m.qubit_count());
        (0..n)
            .map(|q| {
                self.members
                    .iter()
                    .map(|m| m.ops()[q])
                    .find(|&p| p != Pauli::I)
                    .unwrap_or(Pauli::Z)
            })
            .collect()
    }
}

/// True iff at every index the two labels are equal or one is `I`.
pub fn qubit_wise_commute(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.check_same_length(q)?;
    Ok(p.ops()
        .iter()
        .zip(q.ops())
        .all(|(&a, &b)| a == b || a == Pauli::I || b == Pauli::I))
}

/// True iff the strings anticommute at an even number of positions.
pub fn general_commute(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.check_same_length(q)?;
    let clashes = p
        .ops()
        .iter()
        .zip(q.ops())
        .filter(|(&a, &b)| a != b && a != Pauli::I && b != Pauli::I)
        .count();
    Ok(clashes % 2 == 0)
}

/// Whether the string's matrix commutes with all four Bell projectors.
pub fn is_bell_diagonal(p: &PauliString) -> bool {
    if p.qubit_count() != 2 {
        return false;
    }
    let m = p.matrix();
    bell_basis().iter().all(|b| {
        let v = DMatrix::from_column_slice(4, 1, b.amplitudes());
        let proj = &v * v.adjoint();
        (&m * &proj - &proj * &m).norm() < 1e-12
    })
}

struct Draft {
    kind: GroupKind,
    members: Vec<PauliString>,
}

impl Draft {
    fn fits(&self, s: &PauliString) -> bool {
        match self.kind {
            GroupKind::Bell => is_bell_diagonal(s),
            GroupKind::Separable => self.members.iter().all(|m| qubit_wise_commute(m, s).unwrap_or(false)),
        }
    }
}

fn first_fit(groups: &mut Vec<Draft>, strings: impl IntoIterator<Item = PauliString>) {
    for s in strings {
        match groups.iter_mut().find(|g| g.kind == GroupKind::Separable && g.fits(&s)) {
            Some(g) => g.members.push(s),
            None => groups.push(Draft {
                kind: GroupKind::Separable,
                members: vec![s],
            }),
        }
    }
}

/// Repeatedly dissolves the smallest group whose members can all be moved
/// first-fit into the remaining groups.
fn repack(groups: &mut Vec<Draft>) {
    'outer: loop {
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&i| (groups[i].members.len(), i));
        for victim in order {
            let mut trial: Vec<Draft> = groups
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != victim)
                .map(|(_, g)| Draft {
                    kind: g.kind,
                    members: g.members.clone(),
                })
                .collect();
            let movable = groups[victim]
                .members
                .iter()
                .all(|s| match trial.iter_mut().find(|g| g.fits(s)) {
                    Some(g) => {
                        g.members.push(s.clone());
                        true
                    }
                    None => false,
                });
            if movable {
                *groups = trial;
                continue 'outer;
            }
        }
        break;
    }
}

fn finish(groups: Vec<Draft>, mode: CommutativityMode) -> Vec<MeasurementGroup> {
    groups
        .into_iter()
        .map(|g| MeasurementGroup {
            members: g.members,
            mode,
            kind: g.kind,
        })
        .collect()
}

fn qwc_drafts(strings: &[PauliString]) -> Vec<Draft> {
    let mut groups = Vec::new();
    first_fit(&mut groups, strings.iter().cloned());
    repack(&mut groups);
    groups
}

/// Partitions the strings into simultaneously measurable groups. The output
/// is deterministic for a given input order.
pub fn group_strings(strings: &[PauliString], mode: CommutativityMode) -> Result<Vec<MeasurementGroup>> {
    let first = strings.first().ok_or(Error::EmptyInput)?;
    for s in strings {
        first.check_same_length(s)?;
    }
    let qwc = qwc_drafts(strings);
    if mode == CommutativityMode::Qwc || first.qubit_count() != 2 {
        return Ok(finish(qwc, mode));
    }

    let (bell, rest): (Vec<_>, Vec<_>) = strings.iter().cloned().partition(is_bell_diagonal);
    if bell.is_empty() {
        return Ok(finish(qwc, mode));
    }
    let mut gc = vec![Draft {
        kind: GroupKind::Bell,
        members: bell,
    }];
    first_fit(&mut gc, rest);
    repack(&mut gc);
    if gc.len() < qwc.len() {
        Ok(finish(gc, mode))
    } else {
        Ok(finish(qwc, mode))
    }
}

/// Groups the Hamiltonian's strings, visiting larger |weight| first.
pub fn group_hamiltonian(h: &Hamiltonian, mode: CommutativityMode) -> Result<Vec<MeasurementGroup>> {
    let mut terms: Vec<_> = h.terms().iter().collect();
    terms.sort_by(|a, b| b.weight.abs().total_cmp(&a.weight.abs()));
    let strings: Vec<_> = terms.into_iter().map(|t| t.string.clone()).collect();
    group_strings(&strings, mode)
}
