use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};

use photonic_vqe::error::Error;
use photonic_vqe::formats::{
    emit_run_table, emit_scan, emit_sweep_records, emit_sweep_summary, emit_trace, parse_epsilons, parse_hamiltonian,
    parse_hamiltonian_table, parse_shots, RunRecord, ScanRecord,
};
use photonic_vqe::grouping::{group_hamiltonian, CommutativityMode, GroupKind};
use photonic_vqe::measurement::{compile_setting, Shots};
use photonic_vqe::noise::{mean_stdev, noise_sweep};
use photonic_vqe::optics::{bell_setting, measurement_povm, MeasAngles};
use photonic_vqe::optimize::{Method, OptimizerConfig, StopRule};
use photonic_vqe::pauli::{bell_basis, Hamiltonian};
use photonic_vqe::rng::derive_seed;
use photonic_vqe::vqe::{run_vqe, RunTrace, VqeMode};

const EXIT_CONFIG: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_RUNTIME: u8 = 4;

const BELL_NAMES: [&str; 4] = ["psi+", "psi-", "phi+", "phi-"];

/// Photonic two-qubit VQE experiments.
#[derive(Parser)]
#[command(name = "pvqe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show how a Hamiltonian's strings are grouped into measurement settings.
    Group {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Run seeded VQE trials and write traces plus a results table.
    Run {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo sweep over measurement waveplate offset errors.
    NoiseSweep {
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Offset standard deviations in degrees.
        #[arg(long, value_parser = epsilons_arg, default_value = "0,1,2,3,5,7,10")]
        epsilons: EpsilonGrid,
        #[command(flatten)]
        common: Common,
    },
    /// Run VQE for every row of a weight table.
    Scan {
        /// CSV with header `R,<string1>,<string2>,...`.
        #[arg(long)]
        table: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check that a measurement angle vector realizes the Bell basis.
    BellCheck {
        /// Eight angles H4,Q4,H5,Q5,H6,Q6,H7,Q7 in degrees.
        #[arg(long, value_parser = angles_arg)]
        angles: Option<MeasAngles>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Shots per iteration, or `exact`.
    #[arg(long, value_parser = shots_arg, default_value = "9000")]
    shots: Shots,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative energy change used by the `relative` stop rule.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Cobyla)]
    optimizer: OptimizerArg,
    #[arg(long, value_enum, default_value_t = StopArg::Radius)]
    stop_rule: StopArg,
    /// Initial step in degrees.
    #[arg(long, default_value_t = 15.0)]
    initial_step: f64,
    /// Directory for data files; nothing is written when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pauli,
    Entangled,
    Both,
}

impl ModeArg {
    fn modes(self) -> &'static [VqeMode] {
        match self {
            ModeArg::Pauli => &[VqeMode::Pauli],
            ModeArg::Entangled => &[VqeMode::Entangled],
            ModeArg::Both => &VqeMode::BOTH,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OptimizerArg {
    Cobyla,
    NelderMead,
}

#[derive(Clone, Copy, ValueEnum)]
enum StopArg {
    Radius,
    Relative,
}

fn shots_arg(s: &str) -> Result<Shots, String> {
    parse_shots(s).map_err(|e| e.to_string())
}

#[derive(Clone)]
struct EpsilonGrid(Vec<f64>);

fn epsilons_arg(s: &str) -> Result<EpsilonGrid, String> {
    parse_epsilons(s).map(EpsilonGrid).map_err(|e| e.to_string())
}

fn angles_arg(s: &str) -> Result<MeasAngles, String> {
    let values = s
        .split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| format!("bad angle {f:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let arr: [f64; 8] = values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 8 angles, found {}", v.len()))?;
    MeasAngles::new(arr).map_err(|e| e.to_string())
}

enum Failure {
    Config(anyhow::Error),
    Parse(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    fn from_lib(e: Error, context: impl std::fmt::Display) -> Self {
        let wrapped = anyhow!(e.clone()).context(context.to_string());
        if e.is_parse() {
            Failure::Parse(wrapped)
        } else {
            match e {
                Error::InvalidConfig(_)
                | Error::UncoveredString(_)
                | Error::UnrealizableGroup(_)
                | Error::InsufficientShots { .. }
                | Error::TooManyQubits { .. }
                | Error::EmptyInput => Failure::Config(wrapped),
                _ => Failure::Runtime(wrapped),
            }
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Group { hamiltonian, mode } => cmd_group(&hamiltonian, mode),
        Command::Run { hamiltonian, common } => cmd_run(&hamiltonian, &common),
        Command::NoiseSweep {
            hamiltonian,
            epsilons,
            common,
        } => cmd_noise_sweep(&hamiltonian, &epsilons.0, &common),
        Command::Scan { table, common } => cmd_scan(&table, &common),
        Command::BellCheck { angles } => cmd_bell_check(angles.unwrap_or_else(bell_setting)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, err) = match f {
                Failure::Config(e) => (EXIT_CONFIG, e),
                Failure::Parse(e) => (EXIT_PARSE, e),
                Failure::Runtime(e) => (EXIT_RUNTIME, e),
            };
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(anyhow!("cannot read {}: {e}", path.display())))
}

fn load_hamiltonian(path: &Path) -> Result<Hamiltonian, Failure> {
    let text = read_file(path)?;
    let label = path
        .file_stem()
        .map_or("hamiltonian".into(), |s| s.to_string_lossy().into_owned());
    parse_hamiltonian(&text, &label).map_err(|e| Failure::from_lib(e, path.display()))
}

impl Common {
    fn optimizer(&self) -> Result<OptimizerConfig, Failure> {
        let cfg = OptimizerConfig {
            method: match self.optimizer {
                OptimizerArg::Cobyla => Method::Cobyla,
                OptimizerArg::NelderMead => Method::NelderMead,
            },
            stop_rule: match self.stop_rule {
                StopArg::Radius => StopRule::TrustRadius,
                StopArg::Relative => StopRule::RelativeChange,
            },
            rel_tol: self.tol,
            max_iterations: self.max_iter,
            initial_step: self.initial_step,
            ..OptimizerConfig::default()
        };
        cfg.validate().map_err(|e| Failure::from_lib(e, "optimizer settings"))?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<OptimizerConfig, Failure> {
        if self.trials == 0 {
            return Err(Failure::Config(anyhow!("--trials must be at least 1")));
        }
        self.optimizer()
    }

    fn output_dir(&self) -> Result<Option<&Path>, Failure> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir).map_err(|e| Failure::Runtime(anyhow!("cannot create {}: {e}", dir.display())))?;
        }
        Ok(self.out.as_deref())
    }
}

fn write_output(dir: Option<&Path>, name: &str, contents: &str) -> CmdResult {
    if let Some(dir) = dir {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Failure::Runtime(anyhow!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_group(path: &Path, mode: ModeArg) -> CmdResult {
    let h = load_hamiltonian(path)?;
    println!(
        "{}: {} strings on {} qubits",
        h.label(),
        h.terms().len(),
        h.qubit_count()
    );
    for m in mode.modes() {
        let cm = m.commutativity();
        let groups = group_hamiltonian(&h, cm).map_err(|e| Failure::from_lib(e, "grouping"))?;
        let kinds: Vec<&str> = groups.iter().map(|g| g.kind.as_str()).collect();
        let noun = if groups.len() == 1 { "setting" } else { "settings" };
        println!("{cm}: {} {noun} ({})", groups.len(), kinds.join(", "));
        for (i, g) in groups.iter().enumerate() {
            let members: Vec<String> = g.members.iter().map(|s| s.to_string()).collect();
            println!("  {}: {:<9} {}", i + 1, g.kind, members.join(" "));
        }
    }
    Ok(())
}

fn run_trial(
    h: &Hamiltonian,
    mode: VqeMode,
    common: &Common,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<RunTrace, Failure> {
    run_vqe(h, mode, common.shots, opt, seed, None)
        .map_err(|e| Failure::from_lib(e, format!("{mode} run with seed {seed}")))
}

fn print_run_table(records: &[RunRecord]) {
    println!(
        "{:<6} {:>5} {:>10} {:>13} {:>15}  stop",
        "mode", "trial", "iterations", "final_energy", "smallest5_mean"
    );
    for r in records {
        println!(
            "{:<6} {:>5} {:>10} {:>13.4} {:>15.4}  {}",
            r.mode, r.trial, r.iterations, r.final_energy, r.smallest5_mean, r.stop
        );
    }
    for mode in VqeMode::BOTH {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.mode == mode).collect();
        if runs.is_empty() {
            continue;
        }
        let (mi, si) = mean_stdev(&runs.iter().map(|r| r.iterations as f64).collect::<Vec<_>>());
        let (me, se) = mean_stdev(&runs.iter().map(|r| r.final_energy).collect::<Vec<_>>());
        let (m5, s5) = mean_stdev(&runs.iter().map(|r| r.smallest5_mean).collect::<Vec<_>>());
        println!("{:<6} {:>5} {:>10.1} {:>13.4} {:>15.4}", mode, "avg", mi, me, m5);
        println!("{:<6} {:>5} {:>10.1} {:>13.4} {:>15.4}", mode, "stdev", si, se, s5);
    }
}

fn cmd_run(path: &Path, common: &Common) -> CmdResult {
    let opt = common.validate()?;
    let h = load_hamiltonian(path)?;
    let dir = common.output_dir()?;
    let mut records = Vec::new();
    for &mode in common.mode.modes() {
        for trial in 0..common.trials {
            let seed = derive_seed(common.seed, &[trial as u64]);
            let trace = run_trial(&h, mode, common, &opt, seed)?;
            write_output(
                dir,
                &format!("trace_{mode}_{trial}.csv"),
                &emit_trace(&trace.iterations),
            )?;
            records.push(RunRecord {
                mode,
                trial,
                seed,
                iterations: trace.iteration_count(),
                final_energy: trace.final_energy,
                smallest5_mean: trace.mean_of_smallest(5),
                stop: trace.stop,
            });
        }
    }
    write_output(dir, "runs.csv", &emit_run_table(&records))?;
    let exact = h.ground_energy_exact().map(|(e, _)| e).ok();
    print!(
        "{}  shots={}  optimizer={}  stop={}",
        h.label(),
        common.shots,
        opt.method,
        opt.stop_rule
    );
    match exact {
        Some(e) => println!("  exact={e:.4}"),
        None => println!(),
    }
    print_run_table(&records);
    Ok(())
}

fn cmd_noise_sweep(path: &Path, epsilons: &[f64], common: &Common) -> CmdResult {
    let opt = common.validate()?;
    let h = load_hamiltonian(path)?;
    let dir = common.output_dir()?;
    let sweep = noise_sweep(&h, epsilons, common.trials, common.shots, &opt, common.seed)
        .map_err(|e| Failure::from_lib(e, "noise sweep"))?;
    let modes = common.mode.modes();
    let records: Vec<_> = sweep
        .records
        .iter()
        .filter(|r| modes.contains(&r.mode))
        .cloned()
        .collect();
    let summary: Vec<_> = sweep
        .summary()
        .into_iter()
        .filter(|s| modes.contains(&s.mode))
        .collect();
    write_output(dir, "sweep_records.csv", &emit_sweep_records(&records))?;
    write_output(dir, "sweep_summary.csv", &emit_sweep_summary(&summary))?;
    println!("{}  shots={}  trials={}", h.label(), common.shots, common.trials);
    println!(
        "{:>8} {:<6} {:>10} {:>10} {:>10} {:>10}",
        "epsilon", "mode", "mean", "stdev", "min", "max"
    );
    for s in &summary {
        let e = sweep.energies(s.epsilon, s.mode);
        let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{:>8} {:<6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            s.epsilon, s.mode, s.mean, s.stdev, lo, hi
        );
    }
    Ok(())
}

fn cmd_scan(path: &Path, common: &Common) -> CmdResult {
    let opt = common.validate()?;
    let text = read_file(path)?;
    let table = parse_hamiltonian_table(&text).map_err(|e| Failure::from_lib(e, path.display()))?;
    let dir = common.output_dir()?;
    let mut records = Vec::new();
    println!(
        "{:>8} {:>10} {:<6} {:>10} {:>10} {:>10}",
        "R", "exact", "mode", "best", "mean", "stdev"
    );
    for (row, (r, _)) in table.rows.iter().enumerate() {
        let h = table
            .hamiltonian(row)
            .map_err(|e| Failure::from_lib(e, format!("row R={r}")))?;
        let (exact, _) = h
            .ground_energy_exact()
            .map_err(|e| Failure::from_lib(e, format!("row R={r}")))?;
        for &mode in common.mode.modes() {
            let mut energies = Vec::new();
            for trial in 0..common.trials {
                let seed = derive_seed(common.seed, &[row as u64, trial as u64]);
                let trace = run_trial(&h, mode, common, &opt, seed)?;
                energies.push(trace.final_energy);
                records.push(ScanRecord {
                    r: *r,
                    mode,
                    trial,
                    final_energy: trace.final_energy,
                    exact_energy: exact,
                    iterations: trace.iteration_count(),
                });
            }
            let (mean, sd) = mean_stdev(&energies);
            let best = energies.iter().copied().fold(f64::INFINITY, f64::min);
            println!(
                "{:>8} {:>10.4} {:<6} {:>10.4} {:>10.4} {:>10.4}",
                r, exact, mode, best, mean, sd
            );
        }
    }
    write_output(dir, "scan.csv", &emit_scan(&records))?;
    Ok(())
}

fn cmd_bell_check(angles: MeasAngles) -> CmdResult {
    let povm = measurement_povm(&angles);
    let bell = bell_basis();
    let list: Vec<String> = angles.0.iter().map(|a| a.to_string()).collect();
    println!("angles (H4,Q4,H5,Q5,H6,Q6,H7,Q7): {}", list.join(","));
    println!("{:<4} {:<6} {:>16}  best match", "det", "target", "fidelity");
    for (k, v) in povm.vectors.iter().enumerate() {
        let fids: Vec<f64> = bell.iter().map(|b| b.fidelity(v)).collect();
        let best = (0..4).max_by(|&i, &j| fids[i].total_cmp(&fids[j])).unwrap_or(0);
        println!(
            "D{:<3} {:<6} {:>16.12}  {} ({:.12})",
            k + 1,
            BELL_NAMES[k],
            fids[k],
            BELL_NAMES[best],
            fids[best]
        );
    }
    let group = group_hamiltonian(&Hamiltonian::heisenberg(), CommutativityMode::GcBell)
        .map_err(|e| Failure::from_lib(e, "Bell group"))?
        .into_iter()
        .find(|g| g.kind == GroupKind::Bell)
        .ok_or_else(|| Failure::Runtime(anyhow!("no Bell group for XX, YY, ZZ")))?;
    let setting = compile_setting(&group)
        .map_err(|e| Failure::from_lib(e, "Bell setting"))?
        .with_angles(angles);
    println!("projector-sum residuals (Frobenius):");
    for s in &group.members {
        let eig = setting.eigenvalues(s).expect("Bell group member");
        let residual = setting.reconstruction_error(s).expect("Bell group member");
        println!("  {s}: eigenvalues {eig:?}  residual {residual:.3e}");
    }
    Ok(())
}
