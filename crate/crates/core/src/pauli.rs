//! Pauli strings, qubit Hamiltonians and exact expectation values.
//!
//! Qubit ordering is fixed crate-wide: the leftmost label of a Pauli string
//! acts on qubit 0, which is the most significant bit of a basis index. For
//! the photonic processor qubit 0 is the path (a = 0, b = 1) and qubit 1 the
//! polarization (H = 0, V = 1), so the two-qubit basis is ordered
//! `{aH, aV, bH, bV}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};

/// Largest qubit count accepted by the dense ground-state oracle.
pub const MAX_DENSE_QUBITS: usize = 8;

/// Tolerance on `Σ|a|² − 1` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// 2×2 matrix in the computational basis.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// Orthonormal eigenvectors, +1 eigenvector first. The identity uses the
    /// computational basis.
    pub fn eigenbasis(self) -> [[Complex64; 2]; 2] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            Pauli::I | Pauli::Z => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[h, h], [h, -h]],
            Pauli::Y => [[h, h * I], [h, -h * I]],
        }
    }
}

/// Tensor product of single-qubit Pauli operators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyPauliString);
        }
        Ok(Self { ops })
    }

    /// Parses the canonical text form, one label per character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyPauliString);
        }
        let ops = text
            .chars()
            .enumerate()
            .map(|(position, ch)| Pauli::from_char(ch).ok_or(Error::InvalidPauliLabel { ch, position }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ops })
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; qubits])
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn qubit_count(&self) -> usize {
        self.ops.len()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub(crate) fn check_same_length(&self, other: &PauliString) -> Result<()> {
        if self.ops.len() != other.ops.len() {
            return Err(Error::LengthMismatch {
                expected: self.ops.len(),
                found: other.ops.len(),
            });
        }
        Ok(())
    }

    /// Dense `2ⁿ × 2ⁿ` matrix: Kronecker product of the factors in qubit order.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(1, 1, ONE);
        for p in &self.ops {
            let m = p.matrix();
            let single = DMatrix::from_fn(2, 2, |r, c| m[r][c]);
            out = out.kronecker(&single);
        }
        out
    }

    /// Applies the operator to an amplitude vector by bit manipulation.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let n = self.ops.len();
        let mut flip = 0usize;
        for (q, p) in self.ops.iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip |= 1 << (n - 1 - q);
            }
        }
        let mut out = vec![ZERO; amps.len()];
        for (idx, &a) in amps.iter().enumerate() {
            let mut phase = ONE;
            for (q, p) in self.ops.iter().enumerate() {
                let bit = (idx >> (n - 1 - q)) & 1;
                match p {
                    Pauli::I | Pauli::X => {}
                    Pauli::Y => phase *= if bit == 0 { I } else { -I },
                    Pauli::Z => {
                        if bit == 1 {
                            phase = -phase;
                        }
                    }
                }
            }
            out[idx ^ flip] += phase * a;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Weighted Pauli string `w · σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub string: PauliString,
    pub weight: f64,
}

impl PauliTerm {
    pub fn new(string: PauliString, weight: f64) -> Result<Self> {
        if !weight.is_finite() {
            return Err(Error::NonFiniteWeight {
                string: string.to_string(),
            });
        }
        Ok(Self { string, weight })
    }
}

/// Normalized pure state over `2ⁿ` basis amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        check_dimension(amps.len())?;
        let norm_sq = norm_sq(&amps);
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        check_dimension(amps.len())?;
        let norm = norm_sq(&amps).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { amps })
    }

    pub(crate) fn from_normalized_unchecked(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    /// `(|01⟩ − |10⟩)/√2`, the ground state of `XX + YY + ZZ`.
    pub fn singlet() -> Self {
        bell_basis()[1].clone()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn qubit_count(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

fn check_dimension(dim: usize) -> Result<()> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::BadDimension { found: dim });
    }
    Ok(())
}

pub(crate) fn norm_sq(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// `Σ conj(a_k) b_k`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// The Bell basis in the order `ψ⁺, ψ⁻, φ⁺, φ⁻`.
pub fn bell_basis() -> [StateVector; 4] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let v = |a: [f64; 4]| StateVector::from_normalized_unchecked(a.iter().map(|&x| h * x).collect());
    [
        v([0.0, 1.0, 1.0, 0.0]),
        v([0.0, 1.0, -1.0, 0.0]),
        v([1.0, 0.0, 0.0, 1.0]),
        v([1.0, 0.0, 0.0, -1.0]),
    ]
}

/// `⟨ψ|σ|ψ⟩` for a normalized state.
pub fn expectation_exact(state: &StateVector, p: &PauliString) -> Result<f64> {
    if p.qubit_count() != state.qubit_count() {
        return Err(Error::DimensionMismatch {
            expected: 1 << p.qubit_count(),
            found: state.dim(),
        });
    }
    Ok(inner(state.amplitudes(), &p.apply(state.amplitudes())).re)
}

/// Qubit Hamiltonian `Σ_j w_j σ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    label: String,
    qubit_count: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    /// Builds a Hamiltonian, merging repeated strings by adding their
    /// weights. Terms keep the order of first appearance; zero weights stay.
    pub fn new(
        label: impl Into<String>,
        qubit_count: usize,
        terms: impl IntoIterator<Item = PauliTerm>,
    ) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::ZeroQubits);
        }
        let mut merged: Vec<PauliTerm> = Vec::new();
        for term in terms {
            if term.string.qubit_count() != qubit_count {
                return Err(Error::LengthMismatch {
                    expected: qubit_count,
                    found: term.string.qubit_count(),
                });
            }
            if !term.weight.is_finite() {
                return Err(Error::NonFiniteWeight {
                    string: term.string.to_string(),
                });
            }
            match merged.iter_mut().find(|t| t.string == term.string) {
                Some(existing) => existing.weight += term.weight,
                None => merged.push(term),
            }
        }
        if let Some(t) = merged.iter().find(|t| !t.weight.is_finite()) {
            return Err(Error::NonFiniteWeight {
                string: t.string.to_string(),
            });
        }
        Ok(Self {
            label: label.into(),
            qubit_count,
            terms: merged,
        })
    }

    /// Convenience constructor from `(string, weight)` pairs.
    pub fn from_pairs(label: impl Into<String>, pairs: &[(&str, f64)]) -> Result<Self> {
        let first = pairs.first().ok_or(Error::EmptyInput)?;
        let qubits = first.0.chars().count();
        let terms = pairs
            .iter()
            .map(|(s, w)| PauliTerm::new(PauliString::parse(s)?, *w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, qubits, terms)
    }

    /// Two-qubit antiferromagnetic Heisenberg model `XX + YY + ZZ`.
    pub fn heisenberg() -> Self {
        Self::from_pairs("Heisenberg-2q", &[("XX", 1.0), ("YY", 1.0), ("ZZ", 1.0)]).expect("static Hamiltonian")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.iter().map(|t| &t.string)
    }

    pub fn weight_of(&self, s: &PauliString) -> Option<f64> {
        self.terms.iter().find(|t| &t.string == s).map(|t| t.weight)
    }

    /// Dense matrix `Σ w_j M(σ_j)`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.qubit_count;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for t in &self.terms {
            m += t.string.matrix() * Complex64::new(t.weight, 0.0);
        }
        m
    }

    fn check_state(&self, dim: usize) -> Result<()> {
        let expected = 1usize << self.qubit_count;
        if dim != expected {
            return Err(Error::DimensionMismatch { expected, found: dim });
        }
        Ok(())
    }

    /// `Σ_j w_j ⟨σ_j⟩_ψ` from exact per-string expectations.
    pub fn expectation_exact(&self, state: &StateVector) -> Result<f64> {
        self.check_state(state.dim())?;
        self.terms
            .iter()
            .try_fold(0.0, |acc, t| Ok(acc + t.weight * expectation_exact(state, &t.string)?))
    }

    /// Minimum eigenvalue and a normalized eigenvector of the dense matrix.
    pub fn ground_energy_exact(&self) -> Result<(f64, StateVector)> {
        if self.qubit_count > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                qubits: self.qubit_count,
                max: MAX_DENSE_QUBITS,
            });
        }
        let eig = hermitian_eigen(&self.matrix());
        let vec = eig.vectors.column(0).iter().copied().collect();
        Ok((eig.values[0], StateVector::normalized(vec)?))
    }
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` for any nonzero amplitude vector.
pub fn rayleigh_quotient(amps: &[Complex64], h: &Hamiltonian) -> Result<f64> {
    h.check_state(amps.len())?;
    let denom = norm_sq(amps);
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::ZeroVector);
    }
    let numer: f64 = h
        .terms
        .iter()
        .map(|t| t.weight * inner(amps, &t.string.apply(amps)).re)
        .sum();
    Ok(numer / denom)
}

/// The nine strings of the two-qubit HeH⁺ Hamiltonian in their usual
/// listing order.
pub const HEH_PLUS_STRINGS: [&str; 9] = ["II", "IZ", "ZI", "ZZ", "IX", "ZX", "XI", "XZ", "XX"];

/// Parses [`HEH_PLUS_STRINGS`].
pub fn heh_plus_strings() -> Vec<PauliString> {
    HEH_PLUS_STRINGS
        .iter()
        .map(|s| PauliString::parse(s).expect("static string"))
        .collect()
}
