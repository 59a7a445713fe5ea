//! Gaussian waveplate offsets on the measurement stage and Monte-Carlo
//! sweeps comparing the two VQE variants under miscalibration.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::measurement::{EnergyEstimator, Shots};
use crate::optics::{prepare_ansatz, MeasAngles, PrepAngles};
use crate::optimize::{minimize, Method, OptimizerConfig, StopRule};
use crate::pauli::Hamiltonian;
use crate::rng::{derive_seed, stream_rng};
use crate::vqe::{build_estimator, run_with_estimator, VqeMode};

pub const DEFAULT_EPSILONS: [f64; 7] = [0.0, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0];

/// Standard deviation, in degrees, of the offset added to each of the eight
/// measurement plates. Offsets are drawn once per run and per setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub epsilon_deg: f64,
}

impl NoiseSpec {
    pub fn new(epsilon_deg: f64) -> Result<Self> {
        if !(epsilon_deg >= 0.0 && epsilon_deg.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise epsilon must be a finite non-negative number of degrees, got {epsilon_deg}"
            )));
        }
        Ok(Self { epsilon_deg })
    }
}

/// Adds an independent `N(0, ε²)` offset to each of the eight angles.
pub fn perturb_angles<R: Rng + ?Sized>(angles: &MeasAngles, spec: &NoiseSpec, rng: &mut R) -> Result<MeasAngles> {
    if spec.epsilon_deg == 0.0 {
        return Ok(*angles);
    }
    let normal = Normal::new(0.0, spec.epsilon_deg).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    Ok(MeasAngles(angles.0.map(|a| a + normal.sample(rng))))
}

/// Hermitian matrix whose expectation is the energy a (possibly
/// miscalibrated) estimator reports with exact probabilities.
pub fn effective_observable(estimator: &EnergyEstimator) -> nalgebra::DMatrix<num_complex::Complex64> {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    for term in estimator.hamiltonian().terms() {
        let w = Complex64::new(term.weight, 0.0);
        if term.string.is_identity() {
            m += DMatrix::<Complex64>::identity(4, 4) * w;
            continue;
        }
        let (setting, eig) = estimator
            .settings()
            .iter()
            .find_map(|s| s.eigenvalues(&term.string).map(|e| (s, e)))
            .expect("estimator covers every term");
        for (v, &e) in setting.povm.vectors.iter().zip(eig) {
            let col = DMatrix::from_column_slice(4, 1, v.amplitudes());
            m += &col * col.adjoint() * (w * e as f64);
        }
    }
    m
}

/// Lowest value the estimator can report with exact probabilities over all
/// two-qubit states.
pub fn effective_ground_energy(estimator: &EnergyEstimator) -> f64 {
    hermitian_eigen(&effective_observable(estimator)).values[0]
}

/// Minimizes the exact-probability energy over the plate angles with
/// several tight Nelder–Mead restarts; returns the lowest value found.
pub fn minimize_over_ansatz(estimator: &EnergyEstimator, starts: usize, seed: u64) -> Result<f64> {
    let cfg = OptimizerConfig {
        method: Method::NelderMead,
        stop_rule: StopRule::TrustRadius,
        rel_tol: 1e-15,
        max_iterations: 4000,
        initial_step: 20.0,
        final_step: 1e-9,
    };
    let mut rng = stream_rng(seed, 0);
    let mut best = f64::INFINITY;
    for _ in 0..starts.max(1) {
        let x0: Vec<f64> = (0..6).map(|_| rng.random_range(0.0..180.0)).collect();
        let mut x = x0;
        // Restart from the best point so a collapsed simplex is re-expanded.
        for _ in 0..3 {
            let objective = |x: &[f64]| -> Result<f64> {
                let state = prepare_ansatz(&PrepAngles(x.try_into().expect("six plate angles")));
                Ok(estimator.estimate(&state, Shots::Exact, &mut rng)?.value)
            };
            let m = minimize(objective, &x, &cfg)?;
            let b = m.best();
            best = best.min(b.value);
            x = b.x.clone();
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub mode: VqeMode,
    pub trial: usize,
    pub final_energy: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub epsilon: f64,
    pub mode: VqeMode,
    pub trials: usize,
    pub mean: f64,
    pub stdev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub epsilon_grid: Vec<f64>,
    /// Ordered by epsilon, then mode, then trial.
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn energies(&self, epsilon: f64, mode: VqeMode) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.epsilon == epsilon && r.mode == mode)
            .map(|r| r.final_energy)
            .collect()
    }

    pub fn summary(&self) -> Vec<SweepSummary> {
        let mut out = Vec::new();
        for &epsilon in &self.epsilon_grid {
            for mode in VqeMode::BOTH {
                let e = self.energies(epsilon, mode);
                let (mean, stdev) = mean_stdev(&e);
                out.push(SweepSummary {
                    epsilon,
                    mode,
                    trials: e.len(),
                    mean,
                    stdev,
                });
            }
        }
        out
    }
}

/// Mean and sample standard deviation (`n − 1` denominator; 0 for one value).
pub fn mean_stdev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn validate_epsilons(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("epsilon grid is empty".into()));
    }
    for &e in grid {
        NoiseSpec::new(e)?;
    }
    Ok(())
}

/// Runs `trials` seeded VQE runs per epsilon and mode, in parallel.
pub fn noise_sweep(
    h: &Hamiltonian,
    epsilon_grid: &[f64],
    trials: usize,
    shots: Shots,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<SweepResult> {
    validate_epsilons(epsilon_grid)?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    opt.validate()?;
    let estimators = [
        build_estimator(h, VqeMode::Pauli)?,
        build_estimator(h, VqeMode::Entangled)?,
    ];
    let jobs: Vec<(usize, VqeMode, usize)> = (0..epsilon_grid.len())
        .flat_map(|e| {
            VqeMode::BOTH
                .into_iter()
                .flat_map(move |m| (0..trials).map(move |t| (e, m, t)))
        })
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(e, mode, trial)| {
            let epsilon = epsilon_grid[e];
            let spec = NoiseSpec::new(epsilon)?;
            let run_seed = derive_seed(seed, &[e as u64, trial as u64]);
            let est = &estimators[usize::from(mode == VqeMode::Entangled)];
            let trace = run_with_estimator(est, mode, shots, opt, run_seed, Some(&spec))?;
            Ok(SweepRecord {
                epsilon,
                mode,
                trial,
                final_energy: trace.final_energy,
                iterations: trace.iteration_count(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        epsilon_grid: epsilon_grid.to_vec(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::bell_setting;

    #[test]
    fn zero_epsilon_is_identity() {
        let a = bell_setting();
        let out = perturb_angles(&a, &NoiseSpec::new(0.0).unwrap(), &mut stream_rng(1, 0)).unwrap();
        assert_eq!(out, a);
    }

    #[test]
    fn offset_moments() {
        let spec = NoiseSpec::new(5.0).unwrap();
        let mut rng = stream_rng(42, 0);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| perturb_angles(&MeasAngles([0.0; 8]), &spec, &mut rng).unwrap().0[0])
            .collect();
        let (mean, sd) = mean_stdev(&samples);
        assert!(mean.abs() < 0.1);
        assert!((sd - 5.0).abs() < 0.1, "{sd}");
    }

    #[test]
    fn seeds_give_different_offsets() {
        let spec = NoiseSpec::new(2.0).unwrap();
        let a = perturb_angles(&bell_setting(), &spec, &mut stream_rng(1, 0)).unwrap();
        let b = perturb_angles(&bell_setting(), &spec, &mut stream_rng(2, 0)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn negative_epsilon_rejected() {
        assert!(NoiseSpec::new(-1.0).is_err());
        assert!(NoiseSpec::new(f64::NAN).is_err());
        assert!(validate_epsilons(&[]).is_err());
        assert!(validate_epsilons(&[0.0, -2.0]).is_err());
    }

    #[test]
    fn miscalibrated_bell_setting_keeps_the_ground_energy() {
        let h = Hamiltonian::heisenberg();
        let est = build_estimator(&h, VqeMode::Entangled).unwrap();
        let spec = NoiseSpec::new(10.0).unwrap();
        let mut rng = stream_rng(9, 0);
        for _ in 0..20 {
            let angles = perturb_angles(&est.settings()[0].angles, &spec, &mut rng).unwrap();
            let noisy = est.with_apparatus(&[angles]).unwrap();
            assert!((effective_ground_energy(&noisy) + 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn noiseless_effective_observable_is_the_hamiltonian() {
        let h = Hamiltonian::heisenberg();
        for mode in VqeMode::BOTH {
            let est = build_estimator(&h, mode).unwrap();
            assert!((effective_observable(&est) - h.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn ansatz_minimization_reaches_the_ground_energy() {
        let h = Hamiltonian::heisenberg();
        let est = build_estimator(&h, VqeMode::Entangled).unwrap();
        assert!((minimize_over_ansatz(&est, 3, 1).unwrap() + 3.0).abs() < 1e-6);
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let h = Hamiltonian::heisenberg();
        let opt = OptimizerConfig::default();
        let a = noise_sweep(&h, &[0.0, 2.0], 2, Shots::Exact, &opt, 3).unwrap();
        let b = noise_sweep(&h, &[0.0, 2.0], 2, Shots::Exact, &opt, 3).unwrap();
        assert_eq!(a, b);
        let keys: Vec<(f64, VqeMode, usize)> = a.records.iter().map(|r| (r.epsilon, r.mode, r.trial)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        assert_eq!(keys, sorted);
        for s in a.summary() {
            assert_eq!(s.trials, 2);
        }
        assert!(noise_sweep(&h, &[0.0], 0, Shots::Exact, &opt, 3).is_err());
    }

    #[test]
    fn mean_stdev_examples() {
        assert_eq!(mean_stdev(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_stdev(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }
}
