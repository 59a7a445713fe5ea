//! Measurement settings, Born-rule probabilities, shot sampling and energy
//! assembly.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grouping::{GroupKind, MeasurementGroup};
use crate::optics::{bell_setting, measurement_povm, product_basis_setting, DetectorPovm, MeasAngles};
use crate::pauli::{Hamiltonian, PauliString, StateVector};

/// Shot budget for one energy estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    /// Use the exact outcome probabilities.
    Exact,
    /// Sample this many shots in total, split over the settings.
    Count(u64),
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

/// A configured apparatus plus the eigenvalue every detector reports for
/// each Pauli string the setting covers.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    pub angles: MeasAngles,
    pub povm: DetectorPovm,
    pub eig_table: Vec<(PauliString, [i8; 4])>,
    pub source_group: MeasurementGroup,
}

impl MeasurementSetting {
    pub fn eigenvalues(&self, s: &PauliString) -> Option<&[i8; 4]> {
        self.eig_table.iter().find(|(p, _)| p == s).map(|(_, e)| e)
    }

    /// The same setting with the apparatus at different plate angles. The
    /// eigenvalue table is kept, as an experimenter unaware of the offsets
    /// would keep it.
    pub fn with_angles(&self, angles: MeasAngles) -> Self {
        Self {
            angles,
            povm: measurement_povm(&angles),
            eig_table: self.eig_table.clone(),
            source_group: self.source_group.clone(),
        }
    }

    /// Frobenius norm of `Σ_k e_k |v_k⟩⟨v_k| − M(σ)`.
    pub fn reconstruction_error(&self, s: &PauliString) -> Option<f64> {
        let eig = self.eigenvalues(s)?;
        Some(reconstruction_error(&self.povm, eig, s))
    }
}

fn reconstruction_error(povm: &DetectorPovm, eig: &[i8; 4], s: &PauliString) -> f64 {
    let target = s.matrix();
    let mut sum = nalgebra::DMatrix::zeros(4, 4);
    for (v, &e) in povm.vectors.iter().zip(eig) {
        let col = nalgebra::DMatrix::from_column_slice(4, 1, v.amplitudes());
        sum += &col * col.adjoint() * num_complex::Complex64::new(e as f64, 0.0);
    }
    (sum - target).norm()
}

/// Chooses plate angles for the group and derives its eigenvalue table.
pub fn compile_setting(group: &MeasurementGroup) -> Result<MeasurementSetting> {
    group.validate()?;
    let qubits = group.members[0].qubit_count();
    if qubits != 2 {
        return Err(Error::UnrealizableGroup(format!(
            "the processor measures two qubits, group has {qubits}"
        )));
    }
    let angles = match group.kind {
        GroupKind::Bell => bell_setting(),
        GroupKind::Separable => {
            let bases = group.local_bases();
            product_basis_setting(bases[0].eigenbasis(), bases[1].eigenbasis())
        }
    };
    let povm = measurement_povm(&angles);
    let mut eig_table = Vec::with_capacity(group.members.len());
    for s in &group.members {
        if eig_table.iter().any(|(p, _)| p == s) {
            continue;
        }
        let m = diagonal_in(&povm, s);
        let mut eig = [0i8; 4];
        for (e, value) in eig.iter_mut().zip(m) {
            let rounded = value.round();
            if (value - rounded).abs() > 1e-9 || rounded.abs() > 1.0 {
                return Err(Error::UnrealizableGroup(format!(
                    "{s} is not diagonal in the setting basis"
                )));
            }
            *e = rounded as i8;
        }
        if reconstruction_error(&povm, &eig, s) > 1e-10 {
            return Err(Error::UnrealizableGroup(format!(
                "{s} is not reconstructed by the setting"
            )));
        }
        eig_table.push((s.clone(), eig));
    }
    Ok(MeasurementSetting {
        angles,
        povm,
        eig_table,
        source_group: group.clone(),
    })
}

/// `⟨v_k|M(σ)|v_k⟩` for each detector vector.
fn diagonal_in(povm: &DetectorPovm, s: &PauliString) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, v) in out.iter_mut().zip(&povm.vectors) {
        *o = crate::pauli::inner(v.amplitudes(), &s.apply(v.amplitudes())).re;
    }
    out
}

pub fn compile_settings(groups: &[MeasurementGroup]) -> Result<Vec<MeasurementSetting>> {
    groups.iter().map(compile_setting).collect()
}

/// Detector probabilities for a two-qubit state.
pub fn outcome_probabilities(state: &StateVector, setting: &MeasurementSetting) -> Result<[f64; 4]> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    Ok(setting.povm.probabilities(state))
}

/// Detector counts from one setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    pub counts: [u64; 4],
    pub total: u64,
}

/// Multinomial draw of `n` shots by inverse-CDF lookup per shot.
pub fn sample_shots<R: Rng + ?Sized>(probs: &[f64; 4], n: u64, rng: &mut R) -> Result<ShotRecord> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidDistribution(format!("{probs:?} has a negative entry")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidDistribution(format!("{probs:?} sums to {total}")));
    }
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (c, p) in cdf.iter_mut().zip(probs) {
        acc += p;
        *c = acc;
    }
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let u = rng.random::<f64>() * acc;
        let k = cdf.iter().position(|&c| u < c).unwrap_or(3);
        counts[k] += 1;
    }
    Ok(ShotRecord { counts, total: n })
}

/// Equal split of `total` shots; the first `total % settings` settings get
/// one extra shot.
pub fn allocate_shots(total: u64, settings: usize) -> Vec<u64> {
    if settings == 0 {
        return Vec::new();
    }
    let k = settings as u64;
    (0..k).map(|i| total / k + u64::from(i < total % k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    pub per_string: Vec<(PauliString, f64)>,
    /// Shots spent per setting; empty in exact mode.
    pub shots_used: Vec<u64>,
}

/// A Hamiltonian bound to the settings that measure it.
#[derive(Debug, Clone)]
pub struct EnergyEstimator {
    hamiltonian: Hamiltonian,
    settings: Vec<MeasurementSetting>,
    /// Setting index covering each term; `None` for the identity.
    coverage: Vec<Option<usize>>,
}

impl EnergyEstimator {
    pub fn new(hamiltonian: &Hamiltonian, settings: Vec<MeasurementSetting>) -> Result<Self> {
        let coverage = hamiltonian
            .terms()
            .iter()
            .map(|t| {
                if t.string.is_identity() {
                    return Ok(None);
                }
                settings
                    .iter()
                    .position(|s| s.eigenvalues(&t.string).is_some())
                    .map(Some)
                    .ok_or_else(|| Error::UncoveredString(t.string.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            hamiltonian: hamiltonian.clone(),
            settings,
            coverage,
        })
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.settings
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    /// Replaces every setting's apparatus angles, keeping eigenvalue tables.
    pub fn with_apparatus(&self, angles: &[MeasAngles]) -> Result<Self> {
        if angles.len() != self.settings.len() {
            return Err(Error::DimensionMismatch {
                expected: self.settings.len(),
                found: angles.len(),
            });
        }
        Ok(Self {
            hamiltonian: self.hamiltonian.clone(),
            settings: self
                .settings
                .iter()
                .zip(angles)
                .map(|(s, a)| s.with_angles(*a))
                .collect(),
            coverage: self.coverage.clone(),
        })
    }

    pub fn estimate<R: Rng + ?Sized>(&self, state: &StateVector, shots: Shots, rng: &mut R) -> Result<EnergyEstimate> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: state.dim(),
            });
        }
        let probs: Vec<[f64; 4]> = self.settings.iter().map(|s| s.povm.probabilities(state)).collect();
        let (freqs, shots_used) = match shots {
            Shots::Exact => (probs, Vec::new()),
            Shots::Count(n) => {
                if n < self.settings.len() as u64 {
                    return Err(Error::InsufficientShots {
                        shots: n,
                        settings: self.settings.len(),
                    });
                }
                let alloc = allocate_shots(n, self.settings.len());
                let mut freqs = Vec::with_capacity(probs.len());
                for (p, &ns) in probs.iter().zip(&alloc) {
                    // Renormalize away rounding so the sampler's check passes.
                    let sum: f64 = p.iter().sum();
                    let p = p.map(|x| x / sum);
                    let rec = sample_shots(&p, ns, rng)?;
                    freqs.push(rec.counts.map(|c| c as f64 / ns as f64));
                }
                (freqs, alloc)
            }
        };
        let mut value = 0.0;
        let mut per_string = Vec::with_capacity(self.coverage.len());
        for (term, cov) in self.hamiltonian.terms().iter().zip(&self.coverage) {
            let expectation = match cov {
                None => 1.0,
                Some(idx) => {
                    let eig = self.settings[*idx]
                        .eigenvalues(&term.string)
                        .expect("coverage checked at construction");
                    eig.iter().zip(&freqs[*idx]).map(|(&e, f)| e as f64 * f).sum()
                }
            };
            value += term.weight * expectation;
            per_string.push((term.string.clone(), expectation));
        }
        Ok(EnergyEstimate {
            value,
            per_string,
            shots_used,
        })
    }

    /// Standard deviation of the sampled energy estimate at `state` with
    /// `shots` split over the settings.
    pub fn standard_error(&self, state: &StateVector, shots: u64) -> Result<f64> {
        if shots < self.settings.len() as u64 {
            return Err(Error::InsufficientShots {
                shots,
                settings: self.settings.len(),
            });
        }
        let alloc = allocate_shots(shots, self.settings.len());
        let mut per_outcome = vec![[0.0; 4]; self.settings.len()];
        for (term, cov) in self.hamiltonian.terms().iter().zip(&self.coverage) {
            if let Some(idx) = cov {
                let eig = self.settings[*idx]
                    .eigenvalues(&term.string)
                    .expect("coverage checked at construction");
                for (c, &e) in per_outcome[*idx].iter_mut().zip(eig) {
                    *c += term.weight * e as f64;
                }
            }
        }
        let mut var = 0.0;
        for ((setting, c), &n) in self.settings.iter().zip(&per_outcome).zip(&alloc) {
            let p = setting.povm.probabilities(state);
            let mean: f64 = p.iter().zip(c).map(|(p, c)| p * c).sum();
            let second: f64 = p.iter().zip(c).map(|(p, c)| p * c * c).sum();
            var += (second - mean * mean).max(0.0) / n as f64;
        }
        Ok(var.sqrt())
    }
}

/// One-shot convenience wrapper around [`EnergyEstimator`].
pub fn estimate_energy<R: Rng + ?Sized>(
    state: &StateVector,
    h: &Hamiltonian,
    settings: &[MeasurementSetting],
    shots: Shots,
    rng: &mut R,
) -> Result<EnergyEstimate> {
    EnergyEstimator::new(h, settings.to_vec())?.estimate(state, shots, rng)
}
