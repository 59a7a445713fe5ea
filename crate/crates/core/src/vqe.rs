//! The variational loop: random initial plate angles, energy estimation on
//! the simulated apparatus, and derivative-free updates.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grouping::{group_hamiltonian, CommutativityMode};
use crate::measurement::{compile_settings, EnergyEstimator, Shots};
use crate::noise::{perturb_angles, NoiseSpec};
use crate::optics::{prepare_ansatz, MeasAngles, PrepAngles};
use crate::optimize::{minimize, OptimizerConfig, StopReason};
use crate::pauli::Hamiltonian;
use crate::rng::{derive_seed, stream_rng};

pub use crate::pauli::rayleigh_quotient;

const STREAM_INIT: u64 = 0;
const STREAM_SHOTS: u64 = 1;
const STREAM_NOISE: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VqeMode {
    /// Separable Pauli settings only (qubit-wise grouping).
    Pauli,
    /// Bell measurements allowed (general grouping).
    Entangled,
}

impl VqeMode {
    pub const BOTH: [VqeMode; 2] = [VqeMode::Pauli, VqeMode::Entangled];

    pub fn as_str(self) -> &'static str {
        match self {
            VqeMode::Pauli => "VQE_P",
            VqeMode::Entangled => "VQE_E",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "VQE_P" => Some(VqeMode::Pauli),
            "VQE_E" => Some(VqeMode::Entangled),
            _ => None,
        }
    }

    pub fn commutativity(self) -> CommutativityMode {
        match self {
            VqeMode::Pauli => CommutativityMode::Qwc,
            VqeMode::Entangled => CommutativityMode::GcBell,
        }
    }

    fn index(self) -> u64 {
        match self {
            VqeMode::Pauli => 0,
            VqeMode::Entangled => 1,
        }
    }
}

impl fmt::Display for VqeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub angles: PrepAngles,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub iterations: Vec<TraceEntry>,
    pub final_energy: f64,
    pub final_angles: PrepAngles,
    pub seed: u64,
    pub mode: VqeMode,
    pub shots: Shots,
    pub stop: StopReason,
    /// Apparatus angles actually used for each setting.
    pub apparatus: Vec<MeasAngles>,
}

impl RunTrace {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    /// Mean of the `k` lowest energies in the trace.
    pub fn mean_of_smallest(&self, k: usize) -> f64 {
        let mut e: Vec<f64> = self.iterations.iter().map(|t| t.energy).collect();
        e.sort_by(f64::total_cmp);
        let k = k.clamp(1, e.len());
        e[..k].iter().sum::<f64>() / k as f64
    }
}

/// The measurement settings the mode uses for `h`.
pub fn build_estimator(h: &Hamiltonian, mode: VqeMode) -> Result<EnergyEstimator> {
    let groups = group_hamiltonian(h, mode.commutativity())?;
    EnergyEstimator::new(h, compile_settings(&groups)?)
}

fn random_angles<R: Rng + ?Sized>(rng: &mut R) -> PrepAngles {
    PrepAngles(std::array::from_fn(|_| rng.random_range(0.0..180.0)))
}

/// Runs one VQE from a seeded random start.
pub fn run_vqe(
    h: &Hamiltonian,
    mode: VqeMode,
    shots: Shots,
    opt: &OptimizerConfig,
    seed: u64,
    noise: Option<&NoiseSpec>,
) -> Result<RunTrace> {
    let estimator = build_estimator(h, mode)?;
    run_with_estimator(&estimator, mode, shots, opt, seed, noise)
}

/// [`run_vqe`] with precompiled settings.
pub fn run_with_estimator(
    estimator: &EnergyEstimator,
    mode: VqeMode,
    shots: Shots,
    opt: &OptimizerConfig,
    seed: u64,
    noise: Option<&NoiseSpec>,
) -> Result<RunTrace> {
    opt.validate()?;
    if estimator.hamiltonian().qubit_count() != 2 {
        return Err(Error::InvalidConfig("the photonic ansatz prepares two qubits".into()));
    }
    let estimator = match noise {
        Some(spec) => {
            let mut rng = stream_rng(derive_seed(seed, &[mode.index()]), STREAM_NOISE);
            let angles: Vec<MeasAngles> = estimator
                .settings()
                .iter()
                .map(|s| perturb_angles(&s.angles, spec, &mut rng))
                .collect::<Result<_>>()?;
            estimator.with_apparatus(&angles)?
        }
        None => estimator.clone(),
    };
    let start = random_angles(&mut stream_rng(seed, STREAM_INIT));
    let mut shot_rng = stream_rng(derive_seed(seed, &[mode.index()]), STREAM_SHOTS);
    let objective = |x: &[f64]| -> Result<f64> {
        let angles = PrepAngles::new(x.try_into().expect("six plate angles"))?;
        let state = prepare_ansatz(&angles);
        Ok(estimator.estimate(&state, shots, &mut shot_rng)?.value)
    };
    let result = minimize(objective, &start.0, opt)?;
    let iterations: Vec<TraceEntry> = result
        .evaluations
        .iter()
        .map(|e| TraceEntry {
            angles: PrepAngles(e.x.clone().try_into().expect("six plate angles")),
            energy: e.value,
        })
        .collect();
    let best = result.best();
    Ok(RunTrace {
        final_energy: best.value,
        final_angles: PrepAngles(std::array::from_fn(|i| best.x[i].rem_euclid(180.0))),
        iterations,
        seed,
        mode,
        shots,
        stop: result.stop,
        apparatus: estimator.settings().iter().map(|s| s.angles).collect(),
    })
}
