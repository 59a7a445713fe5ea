//! Text formats read and written by the experiment harness.
//!
//! Hamiltonians are plain text, one `<PauliString> <weight>` term per line
//! with `#` comments. Everything else is comma-separated with a fixed
//! header row. Floats are written in their shortest round-trip form, so
//! `parse(emit(x)) == x` for every table.

use std::collections::BTreeSet;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use crate::error::{Error, Result};
use crate::measurement::Shots;
use crate::noise::{validate_epsilons, SweepRecord, SweepSummary};
use crate::optics::PrepAngles;
use crate::optimize::StopReason;
use crate::pauli::{Hamiltonian, PauliString, PauliTerm};
use crate::vqe::{TraceEntry, VqeMode};

pub fn parse_hamiltonian(text: &str, label: &str) -> Result<Hamiltonian> {
    let mut terms = Vec::new();
    let mut qubits = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(s), Some(w), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(line_no, "expected `<PauliString> <weight>`"));
        };
        let string = PauliString::parse(s).map_err(|e| Error::parse(line_no, e.to_string()))?;
        let weight = parse_float(w, line_no)?;
        match qubits {
            None => qubits = Some(string.qubit_count()),
            Some(n) if n != string.qubit_count() => {
                return Err(Error::parse(
                    line_no,
                    format!("{string} has {} qubits, earlier terms have {n}", string.qubit_count()),
                ));
            }
            Some(_) => {}
        }
        terms.push(PauliTerm::new(string, weight)?);
    }
    let qubits = qubits.ok_or_else(|| Error::parse(0, "no terms"))?;
    Hamiltonian::new(label, qubits, terms)
}

pub fn emit_hamiltonian(h: &Hamiltonian) -> String {
    let mut out = format!("# {}\n", h.label().replace('\n', " "));
    for t in h.terms() {
        out.push_str(&format!("{} {}\n", t.string, t.weight));
    }
    out
}

/// Pauli weights tabulated against a scan parameter `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianTable {
    pub strings: Vec<PauliString>,
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl HamiltonianTable {
    pub fn new(strings: Vec<PauliString>, rows: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let first = strings.first().ok_or(Error::EmptyInput)?;
        let mut seen = BTreeSet::new();
        for s in &strings {
            first.check_same_length(s)?;
            if !seen.insert(s) {
                return Err(Error::InvalidConfig(format!("string {s} appears twice")));
            }
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut rs = Vec::new();
        for (r, w) in &rows {
            if w.len() != strings.len() {
                return Err(Error::LengthMismatch {
                    expected: strings.len(),
                    found: w.len(),
                });
            }
            if !r.is_finite() || rs.contains(r) {
                return Err(Error::InvalidConfig(format!("R = {r} is not finite or repeated")));
            }
            rs.push(*r);
        }
        Ok(Self { strings, rows })
    }

    pub fn hamiltonian(&self, row: usize) -> Result<Hamiltonian> {
        let (r, weights) = self.rows.get(row).ok_or(Error::EmptyInput)?;
        let terms = self
            .strings
            .iter()
            .zip(weights)
            .map(|(s, &w)| PauliTerm::new(s.clone(), w))
            .collect::<Result<Vec<_>>>()?;
        Hamiltonian::new(format!("R={r}"), self.strings[0].qubit_count(), terms)
    }
}

pub fn parse_hamiltonian_table(text: &str) -> Result<HamiltonianTable> {
    let (header, rows) = read_csv(text)?;
    if header.get(0) != Some("R") || header.len() < 2 {
        return Err(Error::parse(1, "header must be `R,<string1>,<string2>,...`"));
    }
    let strings = header
        .iter()
        .skip(1)
        .map(|s| PauliString::parse(s).map_err(|e| Error::parse(1, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut seen_r: Vec<f64> = Vec::new();
    for (line, rec) in rows {
        let values = rec.iter().map(|f| parse_float(f, line)).collect::<Result<Vec<_>>>()?;
        if seen_r.contains(&values[0]) {
            return Err(Error::parse(line, format!("R = {} repeated", values[0])));
        }
        seen_r.push(values[0]);
        out.push((values[0], values[1..].to_vec()));
    }
    HamiltonianTable::new(strings, out).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(1, other.to_string()),
    })
}

pub fn emit_hamiltonian_table(table: &HamiltonianTable) -> String {
    let mut header = vec!["R".to_string()];
    header.extend(table.strings.iter().map(|s| s.to_string()));
    write_csv(
        &header,
        table
            .rows
            .iter()
            .map(|(r, w)| std::iter::once(r).chain(w).map(|v| v.to_string()).collect()),
    )
}

const TRACE_HEADER: [&str; 8] = ["iteration", "h1", "q1", "h2", "q2", "h3", "q3", "energy"];

pub fn emit_trace(entries: &[TraceEntry]) -> String {
    write_csv(
        &TRACE_HEADER,
        entries.iter().enumerate().map(|(i, e)| {
            let mut row = vec![i.to_string()];
            row.extend(e.angles.0.iter().map(|a| a.to_string()));
            row.push(e.energy.to_string());
            row
        }),
    )
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceEntry>> {
    let rows = read_with_header(text, &TRACE_HEADER)?;
    let mut out = Vec::with_capacity(rows.len());
    for (k, (line, rec)) in rows.into_iter().enumerate() {
        let index: usize = parse_int(&rec[0], line)?;
        if index != k {
            return Err(Error::parse(line, format!("expected iteration {k}, found {index}")));
        }
        let mut angles = [0.0; 6];
        for (a, f) in angles.iter_mut().zip(rec.iter().skip(1)) {
            *a = parse_float(f, line)?;
        }
        out.push(TraceEntry {
            angles: PrepAngles(angles),
            energy: parse_float(&rec[7], line)?,
        });
    }
    Ok(out)
}

const SWEEP_HEADER: [&str; 5] = ["epsilon", "mode", "trial", "final_energy", "iterations"];
const SWEEP_SUMMARY_HEADER: [&str; 5] = ["epsilon", "mode", "trials", "mean", "stdev"];

pub fn emit_sweep_records(records: &[SweepRecord]) -> String {
    write_csv(
        &SWEEP_HEADER,
        records.iter().map(|r| {
            vec![
                r.epsilon.to_string(),
                r.mode.to_string(),
                r.trial.to_string(),
                r.final_energy.to_string(),
                r.iterations.to_string(),
            ]
        }),
    )
}

pub fn parse_sweep_records(text: &str) -> Result<Vec<SweepRecord>> {
    read_with_header(text, &SWEEP_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            Ok(SweepRecord {
                epsilon: parse_epsilon(&rec[0], line)?,
                mode: parse_mode(&rec[1], line)?,
                trial: parse_int(&rec[2], line)?,
                final_energy: parse_float(&rec[3], line)?,
                iterations: parse_int(&rec[4], line)?,
            })
        })
        .collect()
}

pub fn emit_sweep_summary(summary: &[SweepSummary]) -> String {
    write_csv(
        &SWEEP_SUMMARY_HEADER,
        summary.iter().map(|s| {
            vec![
                s.epsilon.to_string(),
                s.mode.to_string(),
                s.trials.to_string(),
                s.mean.to_string(),
                s.stdev.to_string(),
            ]
        }),
    )
}

pub fn parse_sweep_summary(text: &str) -> Result<Vec<SweepSummary>> {
    read_with_header(text, &SWEEP_SUMMARY_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            Ok(SweepSummary {
                epsilon: parse_epsilon(&rec[0], line)?,
                mode: parse_mode(&rec[1], line)?,
                trials: parse_int(&rec[2], line)?,
                mean: parse_float(&rec[3], line)?,
                stdev: parse_float(&rec[4], line)?,
            })
        })
        .collect()
}

/// One VQE run in a results table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub mode: VqeMode,
    pub trial: usize,
    pub seed: u64,
    pub iterations: usize,
    /// Lowest energy in the trace.
    pub final_energy: f64,
    /// Mean of the five lowest energies in the trace.
    pub smallest5_mean: f64,
    pub stop: StopReason,
}

const RUN_HEADER: [&str; 7] = [
    "mode",
    "trial",
    "seed",
    "iterations",
    "final_energy",
    "smallest5_mean",
    "stop",
];
const AVG: &str = "avg";
const STDEV: &str = "stdev";

/// Writes the runs followed by `avg` and `stdev` rows for each mode.
/// The aggregate rows are derived data and are skipped when parsing.
pub fn emit_run_table(records: &[RunRecord]) -> String {
    let mut rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.mode.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.iterations.to_string(),
                r.final_energy.to_string(),
                r.smallest5_mean.to_string(),
                r.stop.to_string(),
            ]
        })
        .collect();
    for mode in VqeMode::BOTH {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.mode == mode).collect();
        if runs.is_empty() {
            continue;
        }
        let its: Vec<f64> = runs.iter().map(|r| r.iterations as f64).collect();
        let es: Vec<f64> = runs.iter().map(|r| r.final_energy).collect();
        let s5: Vec<f64> = runs.iter().map(|r| r.smallest5_mean).collect();
        let (mi, si) = crate::noise::mean_stdev(&its);
        let (me, se) = crate::noise::mean_stdev(&es);
        let (m5, s5) = crate::noise::mean_stdev(&s5);
        for (tag, i, e, f) in [(AVG, mi, me, m5), (STDEV, si, se, s5)] {
            rows.push(vec![
                mode.to_string(),
                tag.into(),
                String::new(),
                i.to_string(),
                e.to_string(),
                f.to_string(),
                String::new(),
            ]);
        }
    }
    write_csv(&RUN_HEADER, rows.into_iter())
}

pub fn parse_run_table(text: &str) -> Result<Vec<RunRecord>> {
    let mut out = Vec::new();
    for (line, rec) in read_with_header(text, &RUN_HEADER)? {
        let mode = parse_mode(&rec[0], line)?;
        if rec[1] == *AVG || rec[1] == *STDEV {
            parse_float(&rec[3], line)?;
            parse_float(&rec[4], line)?;
            parse_float(&rec[5], line)?;
            continue;
        }
        out.push(RunRecord {
            mode,
            trial: parse_int(&rec[1], line)?,
            seed: parse_int(&rec[2], line)?,
            iterations: parse_int(&rec[3], line)?,
            final_energy: parse_float(&rec[4], line)?,
            smallest5_mean: parse_float(&rec[5], line)?,
            stop: StopReason::parse(&rec[6])
                .ok_or_else(|| Error::parse(line, format!("unknown stop reason {:?}", &rec[6])))?,
        });
    }
    Ok(out)
}

/// One point of a parameter scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub r: f64,
    pub mode: VqeMode,
    pub trial: usize,
    pub final_energy: f64,
    pub exact_energy: f64,
    pub iterations: usize,
}

const SCAN_HEADER: [&str; 6] = ["R", "mode", "trial", "final_energy", "exact_energy", "iterations"];

pub fn emit_scan(records: &[ScanRecord]) -> String {
    write_csv(
        &SCAN_HEADER,
        records.iter().map(|s| {
            vec![
                s.r.to_string(),
                s.mode.to_string(),
                s.trial.to_string(),
                s.final_energy.to_string(),
                s.exact_energy.to_string(),
                s.iterations.to_string(),
            ]
        }),
    )
}

pub fn parse_scan(text: &str) -> Result<Vec<ScanRecord>> {
    read_with_header(text, &SCAN_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            Ok(ScanRecord {
                r: parse_float(&rec[0], line)?,
                mode: parse_mode(&rec[1], line)?,
                trial: parse_int(&rec[2], line)?,
                final_energy: parse_float(&rec[3], line)?,
                exact_energy: parse_float(&rec[4], line)?,
                iterations: parse_int(&rec[5], line)?,
            })
        })
        .collect()
}

/// `exact` or a positive shot count.
pub fn parse_shots(text: &str) -> Result<Shots> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("exact") {
        return Ok(Shots::Exact);
    }
    match t.parse::<u64>() {
        Ok(0) => Err(Error::parse(1, "shot count must be positive")),
        Ok(n) => Ok(Shots::Count(n)),
        Err(_) => Err(Error::parse(
            1,
            format!("expected `exact` or a shot count, found {t:?}"),
        )),
    }
}

/// Comma-separated list of non-negative offsets in degrees.
pub fn parse_epsilons(text: &str) -> Result<Vec<f64>> {
    let grid = text
        .split(',')
        .map(|f| parse_epsilon(f.trim(), 1))
        .collect::<Result<Vec<_>>>()?;
    validate_epsilons(&grid).map_err(|e| Error::parse(1, e.to_string()))?;
    Ok(grid)
}

pub fn emit_epsilons(grid: &[f64]) -> String {
    grid.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_float(field: &str, line: usize) -> Result<f64> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(line, format!("expected a finite number, found {field:?}"))),
    }
}

fn parse_epsilon(field: &str, line: usize) -> Result<f64> {
    let v = parse_float(field, line)?;
    if v < 0.0 {
        return Err(Error::parse(line, format!("epsilon must be non-negative, found {v}")));
    }
    Ok(v)
}

fn parse_int<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found {field:?}")))
}

fn parse_mode(field: &str, line: usize) -> Result<VqeMode> {
    VqeMode::parse(field.trim()).ok_or_else(|| Error::parse(line, format!("unknown mode {field:?}")))
}

type Rows = Vec<(usize, StringRecord)>;

fn read_csv(text: &str) -> Result<(StringRecord, Rows)> {
    let mut reader = ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(&e))?.clone();
    if header.is_empty() {
        return Err(Error::parse(1, "missing header row"));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(&e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec));
    }
    Ok((header, rows))
}

fn read_with_header(text: &str, expected: &[&str]) -> Result<Rows> {
    let (header, rows) = read_csv(text)?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(1, format!("header must be `{}`", expected.join(","))));
    }
    Ok(rows)
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            Error::parse(line, format!("expected {expected_len} fields, found {len}"))
        }
        _ => Error::parse(line, e.to_string()),
    }
}

fn write_csv<H, R>(header: &[H], rows: R) -> String
where
    H: AsRef<str>,
    R: Iterator<Item = Vec<String>>,
{
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header.iter().map(|h| h.as_ref()))
        .expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("fields are UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hamiltonian_text_with_comments() {
        let text = "# Heisenberg\nXX 1.0\n\nYY 1   # trailing\n  ZZ   1e0\n";
        let h = parse_hamiltonian(text, "h").unwrap();
        assert_eq!(
            h,
            Hamiltonian::from_pairs("h", &[("XX", 1.0), ("YY", 1.0), ("ZZ", 1.0)]).unwrap()
        );
    }

    #[test]
    fn hamiltonian_errors_carry_lines() {
        let cases = [
            ("XX 1\nXQ 2\n", 2),
            ("XX 1\nYY\n", 2),
            ("XX 1\nYYY 1\n", 2),
            ("XX nan\n", 1),
            ("XX 1 2\n", 1),
        ];
        for (text, line) in cases {
            match parse_hamiltonian(text, "h") {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_hamiltonian("# nothing\n", "h").unwrap_err().is_parse());
    }

    #[test]
    fn table_parses_and_validates() {
        let t = parse_hamiltonian_table("R,II,ZZ\n0.5,1,2\n# c\n0.9,-1.5,0.25\n").unwrap();
        assert_eq!(t.strings.len(), 2);
        assert_eq!(t.rows[1], (0.9, vec![-1.5, 0.25]));
        let h = t.hamiltonian(1).unwrap();
        assert_eq!(h.weight_of(&PauliString::parse("II").unwrap()), Some(-1.5));
        for bad in [
            "X,II\n1,2\n",
            "R,II,ZZ\n0.5,1\n",
            "R,II,ZZZ\n0.5,1,2\n",
            "R,II,II\n0.5,1,2\n",
            "R,II\n0.5,1\n0.5,2\n",
            "R,II\n",
            "R,II\n0.5,x\n",
        ] {
            assert!(parse_hamiltonian_table(bad).unwrap_err().is_parse(), "{bad:?}");
        }
        match parse_hamiltonian_table("R,II\n0.5,1\n0.7,oops\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn run_table_has_aggregate_rows() {
        let recs: Vec<RunRecord> = (0..3)
            .map(|t| RunRecord {
                mode: VqeMode::Entangled,
                trial: t,
                seed: 40 + t as u64,
                iterations: 50 + t,
                final_energy: -2.9 - 0.01 * t as f64,
                smallest5_mean: -2.8,
                stop: StopReason::StepTooSmall,
            })
            .collect();
        let text = emit_run_table(&recs);
        assert!(text.contains("VQE_E,avg,,51,"));
        assert!(text.contains("VQE_E,stdev,,1,"));
        assert!(!text.contains("VQE_P"));
        assert_eq!(parse_run_table(&text).unwrap(), recs);
    }

    #[test]
    fn shots_and_epsilons() {
        assert_eq!(parse_shots("exact").unwrap(), Shots::Exact);
        assert_eq!(parse_shots("EXACT").unwrap(), Shots::Exact);
        assert_eq!(parse_shots("9000").unwrap(), Shots::Count(9000));
        assert!(parse_shots("0").is_err());
        assert!(parse_shots("-3").is_err());
        assert_eq!(parse_epsilons("0, 1,2.5").unwrap(), vec![0.0, 1.0, 2.5]);
        assert!(parse_epsilons("0,-1").unwrap_err().is_parse());
        assert!(parse_epsilons("").is_err());
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(parse_trace("i,h1\n").unwrap_err().is_parse());
        assert!(parse_sweep_records("").unwrap_err().is_parse());
        assert!(parse_trace("iteration,h1,q1,h2,q2,h3,q3,energy\n1,0,0,0,0,0,0,1\n").is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6..1e6f64, Just(0.0), Just(-0.0), Just(1e-300)]
    }

    fn mode() -> impl Strategy<Value = VqeMode> {
        prop_oneof![Just(VqeMode::Pauli), Just(VqeMode::Entangled)]
    }

    fn stop() -> impl Strategy<Value = StopReason> {
        prop_oneof![
            Just(StopReason::Converged),
            Just(StopReason::StepTooSmall),
            Just(StopReason::MaxIterations)
        ]
    }

    fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
        proptest::collection::vec(0usize..4, n).prop_map(|ix| {
            PauliString::parse(&ix.iter().map(|&i| ['I', 'X', 'Y', 'Z'][i]).collect::<String>()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn hamiltonian_round_trip(n in 1usize..4, terms in proptest::collection::vec((proptest::collection::vec(0usize..4, 3), finite()), 1..10)) {
            let mut seen = BTreeSet::new();
            let mut pairs = Vec::new();
            for (ix, w) in terms {
                let s: String = ix[..n].iter().map(|&i| ['I', 'X', 'Y', 'Z'][i]).collect();
                if seen.insert(s.clone()) {
                    pairs.push(PauliTerm::new(PauliString::parse(&s).unwrap(), w).unwrap());
                }
            }
            let h = Hamiltonian::new("round trip", n, pairs).unwrap();
            prop_assert_eq!(parse_hamiltonian(&emit_hamiltonian(&h), "round trip").unwrap(), h);
        }

        #[test]
        fn table_round_trip(strings in proptest::collection::btree_set(pauli(2), 1..8), rows in proptest::collection::vec(proptest::collection::vec(finite(), 9), 1..6)) {
            let strings: Vec<_> = strings.into_iter().collect();
            let rows: Vec<(f64, Vec<f64>)> = rows
                .into_iter()
                .enumerate()
                .map(|(i, r)| (0.5 + 0.1 * i as f64, r[..strings.len()].to_vec()))
                .collect();
            let t = HamiltonianTable::new(strings, rows).unwrap();
            prop_assert_eq!(parse_hamiltonian_table(&emit_hamiltonian_table(&t)).unwrap(), t);
        }

        #[test]
        fn trace_round_trip(entries in proptest::collection::vec((proptest::array::uniform6(finite()), finite()), 0..20)) {
            let entries: Vec<TraceEntry> = entries.into_iter().map(|(a, e)| TraceEntry { angles: PrepAngles(a), energy: e }).collect();
            prop_assert_eq!(parse_trace(&emit_trace(&entries)).unwrap(), entries);
        }

        #[test]
        fn sweep_round_trip(recs in proptest::collection::vec((0.0..20.0f64, mode(), 0usize..100, finite(), 0usize..300), 0..20)) {
            let records: Vec<SweepRecord> = recs.iter().map(|&(epsilon, mode, trial, final_energy, iterations)| SweepRecord { epsilon, mode, trial, final_energy, iterations }).collect();
            prop_assert_eq!(parse_sweep_records(&emit_sweep_records(&records)).unwrap(), records);
            let summary: Vec<SweepSummary> = recs.iter().map(|&(epsilon, mode, trials, mean, _)| SweepSummary { epsilon, mode, trials, mean, stdev: mean.abs() }).collect();
            prop_assert_eq!(parse_sweep_summary(&emit_sweep_summary(&summary)).unwrap(), summary);
        }

        #[test]
        fn run_table_round_trip(recs in proptest::collection::vec((mode(), 0usize..10, any::<u64>(), 1usize..300, finite(), finite(), stop()), 0..12)) {
            let records: Vec<RunRecord> = recs.into_iter().map(|(mode, trial, seed, iterations, final_energy, smallest5_mean, stop)| RunRecord { mode, trial, seed, iterations, final_energy, smallest5_mean, stop }).collect();
            prop_assert_eq!(parse_run_table(&emit_run_table(&records)).unwrap(), records);
        }

        #[test]
        fn scan_round_trip(recs in proptest::collection::vec((finite(), mode(), 0usize..10, finite(), finite(), 0usize..300), 0..12)) {
            let records: Vec<ScanRecord> = recs.into_iter().map(|(r, mode, trial, final_energy, exact_energy, iterations)| ScanRecord { r, mode, trial, final_energy, exact_energy, iterations }).collect();
            prop_assert_eq!(parse_scan(&emit_scan(&records)).unwrap(), records);
        }

        #[test]
        fn epsilon_round_trip(grid in proptest::collection::vec(0.0..30.0f64, 1..8)) {
            prop_assert_eq!(parse_epsilons(&emit_epsilons(&grid)).unwrap(), grid);
        }

        #[test]
        fn parsers_never_panic(text in "\\PC{0,200}") {
            let _ = parse_hamiltonian(&text, "fuzz");
            let _ = parse_hamiltonian_table(&text);
            let _ = parse_trace(&text);
            let _ = parse_sweep_records(&text);
            let _ = parse_sweep_summary(&text);
            let _ = parse_run_table(&text);
            let _ = parse_scan(&text);
            let _ = parse_shots(&text);
            let _ = parse_epsilons(&text);
        }
    }
}
