//! Jones-calculus model of the path/polarization processor.
//!
//! Conventions:
//!
//! * `HWP(θ) = [[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]]` and
//!   `QWP(θ) = R(θ) diag(1, i) R(−θ)` in the `{H, V}` basis.
//! * Preparation: the input photon is `|H⟩`; it passes H1 then Q1, PBD1 sends
//!   the H component to path a and the V component to path b, then path a
//!   passes H2, Q2 and path b passes H3, Q3.
//! * Measurement mirrors preparation, so each plate pair is traversed
//!   quarter-wave first: Q4, H4 on path a and Q5, H5 on path b. PBD2 keeps
//!   H light in its port (a → port 1, b → port 2) and moves V light to the
//!   other port. Port 1 then passes Q6, H6 and port 2 passes Q7, H7; a
//!   polarizing beamsplitter per port sends H to the first detector and V to
//!   the second, giving D1 = (1, H), D2 = (1, V), D3 = (2, H), D4 = (2, V).
//!
//! With these conventions the angle vector
//! `{45°, 90°, 45°, 0°, 22.5°, 45°, 22.5°, 45°}` registers `ψ⁺, ψ⁻, φ⁺, φ⁻`
//! at D1..D4 respectively.
//!
//! Angles are degrees at the API boundary and converted once internally.

use nalgebra::{Matrix2, Matrix4, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{inner, StateVector};

pub type Jones = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Half-wave plate with its fast axis at `theta_deg` from horizontal.
pub fn hwp_jones(theta_deg: f64) -> Jones {
    let (s, c) = (2.0 * theta_deg.to_radians()).sin_cos();
    Matrix2::new(real(c), real(s), real(s), real(-c))
}

/// Quarter-wave plate with its fast axis at `theta_deg` from horizontal.
pub fn qwp_jones(theta_deg: f64) -> Jones {
    let (s, c) = theta_deg.to_radians().sin_cos();
    let rot = Matrix2::new(real(c), real(-s), real(s), real(c));
    let retard = Matrix2::new(ONE, ZERO, ZERO, Complex64::new(0.0, 1.0));
    rot * retard * rot.transpose()
}

fn check_finite(angles: &[f64]) -> Result<()> {
    if angles.iter().all(|a| a.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidConfig("waveplate angles must be finite".into()))
    }
}

/// Preparation plate angles `(H1, Q1, H2, Q2, H3, Q3)` in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepAngles(pub [f64; 6]);

impl PrepAngles {
    pub const NAMES: [&'static str; 6] = ["h1", "q1", "h2", "q2", "h3", "q3"];

    pub fn new(angles: [f64; 6]) -> Result<Self> {
        check_finite(&angles)?;
        Ok(Self(angles))
    }
}

/// Measurement plate angles `(H4, Q4, H5, Q5, H6, Q6, H7, Q7)` in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasAngles(pub [f64; 8]);

impl MeasAngles {
    pub const NAMES: [&'static str; 8] = ["h4", "q4", "h5", "q5", "h6", "q6", "h7", "q7"];

    pub fn new(angles: [f64; 8]) -> Result<Self> {
        check_finite(&angles)?;
        Ok(Self(angles))
    }
}

/// Prepares `α|aH⟩ + β|aV⟩ + γ|bH⟩ + δ|bV⟩` from the six plate angles.
pub fn prepare_ansatz(angles: &PrepAngles) -> StateVector {
    let [h1, q1, h2, q2, h3, q3] = angles.0;
    let input = Vector2::new(ONE, ZERO);
    let split = qwp_jones(q1) * hwp_jones(h1) * input;
    let path_a = qwp_jones(q2) * hwp_jones(h2) * Vector2::new(split[0], ZERO);
    let path_b = qwp_jones(q3) * hwp_jones(h3) * Vector2::new(ZERO, split[1]);
    StateVector::from_normalized_unchecked(vec![path_a[0], path_a[1], path_b[0], path_b[1]])
}

fn block_diag(a: &Jones, b: &Jones) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

/// Plate pair as traversed in the measurement stage: quarter-wave first.
fn analyzer(h: f64, q: f64) -> Jones {
    hwp_jones(h) * qwp_jones(q)
}

/// 4×4 map from `{aH, aV, bH, bV}` amplitudes to detector amplitudes D1..D4.
pub fn measurement_transfer(angles: &MeasAngles) -> Matrix4<Complex64> {
    let [h4, q4, h5, q5, h6, q6, h7, q7] = angles.0;
    let before = block_diag(&analyzer(h4, q4), &analyzer(h5, q5));
    // aH → (1,H), aV → (2,V), bH → (2,H), bV → (1,V)
    let mut pbd = Matrix4::zeros();
    pbd[(0, 0)] = ONE;
    pbd[(3, 1)] = ONE;
    pbd[(2, 2)] = ONE;
    pbd[(1, 3)] = ONE;
    let after = block_diag(&analyzer(h6, q6), &analyzer(h7, q7));
    after * pbd * before
}

/// Four rank-1 projectors, one per detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorPovm {
    pub vectors: [StateVector; 4],
}

impl DetectorPovm {
    /// Born-rule probabilities `|⟨v_k|ψ⟩|²`.
    pub fn probabilities(&self, state: &StateVector) -> [f64; 4] {
        let mut p = [0.0; 4];
        for (pk, v) in p.iter_mut().zip(&self.vectors) {
            *pk = inner(v.amplitudes(), state.amplitudes()).norm_sqr();
        }
        p
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((a.inner(b) - target).norm());
            }
        }
        worst
    }
}

/// Effective projective measurement realized by the eight plate angles.
pub fn measurement_povm(angles: &MeasAngles) -> DetectorPovm {
    let t = measurement_transfer(angles);
    let adj = t.adjoint();
    let vectors =
        std::array::from_fn(|k| StateVector::from_normalized_unchecked(adj.column(k).iter().copied().collect()));
    DetectorPovm { vectors }
}

/// Angle vector that registers `ψ⁺, ψ⁻, φ⁺, φ⁻` at D1..D4.
pub fn bell_setting() -> MeasAngles {
    MeasAngles([45.0, 90.0, 45.0, 0.0, 22.5, 45.0, 22.5, 45.0])
}

fn wrap_degrees(a: f64) -> f64 {
    let w = a.rem_euclid(180.0);
    if (180.0 - w).abs() < 1e-12 {
        0.0
    } else {
        w
    }
}

/// `(quarter, half)` plate angles that map polarization `s` onto `|H⟩` when
/// traversed quarter-wave first.
pub fn analyzer_angles(s: [Complex64; 2]) -> (f64, f64) {
    let norm = (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
    let (sh, sv) = (s[0] / norm, s[1] / norm);
    let s1 = sh.norm_sqr() - sv.norm_sqr();
    let s2 = 2.0 * (sh.conj() * sv).re;
    // Quarter-wave fast axis along the ellipse's major axis makes it linear.
    let q = 0.5 * s2.atan2(s1).to_degrees();
    let lin = qwp_jones(q) * Vector2::new(sh, sv);
    let pivot = if lin[0].norm() >= lin[1].norm() { lin[0] } else { lin[1] };
    let phase = pivot.conj() / pivot.norm();
    let (x, y) = ((lin[0] * phase).re, (lin[1] * phase).re);
    let h = 0.5 * y.atan2(x).to_degrees();
    (wrap_degrees(q), wrap_degrees(h))
}

/// Angles measuring the product basis `{m_i ⊗ n_j}` with path basis `m` and
/// polarization basis `n`. Detectors register `m0n0, m1n0, m0n1, m1n1`.
pub fn product_basis_setting(path: [[Complex64; 2]; 2], pol: [[Complex64; 2]; 2]) -> MeasAngles {
    let [n0, n1] = pol;
    let m0 = path[0];
    let (q4, h4) = analyzer_angles(n0);
    let (q5, h5) = analyzer_angles(n1);
    let u4 = analyzer(h4, q4).adjoint();
    let u5 = analyzer(h5, q5).adjoint();
    let h_in = Vector2::new(ONE, ZERO);
    let v_in = Vector2::new(ZERO, ONE);
    let phase_of = |v: Vector2<Complex64>, target: [Complex64; 2]| {
        let z = target[0].conj() * v[0] + target[1].conj() * v[1];
        z / z.norm()
    };
    // U4†|H⟩ = e^{iα} n0, U4†|V⟩ = e^{iδ} n1, U5†|H⟩ = e^{iγ} n1, U5†|V⟩ = e^{iβ} n0.
    let alpha = phase_of(u4 * h_in, n0);
    let delta = phase_of(u4 * v_in, n1);
    let gamma = phase_of(u5 * h_in, n1);
    let beta = phase_of(u5 * v_in, n0);
    let port1 = [m0[0] * alpha.conj(), m0[1] * beta.conj()];
    let port2 = [m0[1] * gamma.conj(), m0[0] * delta.conj()];
    let (q6, h6) = analyzer_angles(port1);
    let (q7, h7) = analyzer_angles(port2);
    MeasAngles([h4, q4, h5, q5, h6, q6, h7, q7])
}

/// Isometry of the preparation stage from input polarization to `{aH, aV, bH, bV}`.
pub fn preparation_isometry(angles: &PrepAngles) -> [[Complex64; 2]; 4] {
    let [h1, q1, h2, q2, h3, q3] = angles.0;
    let first = qwp_jones(q1) * hwp_jones(h1);
    let a = qwp_jones(q2) * hwp_jones(h2);
    let b = qwp_jones(q3) * hwp_jones(h3);
    let columns = [0, 1].map(|col| {
        let split = first.column(col);
        let pa = a * Vector2::new(split[0], ZERO);
        let pb = b * Vector2::new(ZERO, split[1]);
        [pa[0], pa[1], pb[0], pb[1]]
    });
    std::array::from_fn(|row| [columns[0][row], columns[1][row]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{bell_basis, Pauli};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &Jones, b: &Jones, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn unitary_error(m: &Jones) -> f64 {
        (m.adjoint() * m - Jones::identity()).norm()
    }

    /// True iff `a = e^{iφ} b` for some φ.
    fn equal_up_to_phase(a: &Jones, b: &Jones, tol: f64) -> bool {
        let (mut r, mut c) = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                if b[(i, j)].norm() > b[(r, c)].norm() {
                    (r, c) = (i, j);
                }
            }
        }
        if b[(r, c)].norm() < tol {
            return a.norm() < tol;
        }
        let phase = a[(r, c)] / b[(r, c)];
        (phase.norm() - 1.0).abs() < tol && close(a, &(b * phase), tol)
    }

    #[test]
    fn hwp_examples() {
        assert!(close(&hwp_jones(0.0), &Matrix2::new(ONE, ZERO, ZERO, -ONE), 1e-15));
        assert!(close(&hwp_jones(45.0), &Matrix2::new(ZERO, ONE, ONE, ZERO), 1e-15));
        let had = Matrix2::new(real(S), real(S), real(S), real(-S));
        assert!(close(&hwp_jones(22.5), &had, 1e-15));
    }

    #[test]
    fn qwp_examples() {
        let i = Complex64::new(0.0, 1.0);
        assert!(close(&qwp_jones(0.0), &Matrix2::new(ONE, ZERO, ZERO, i), 1e-15));
        assert!(close(&qwp_jones(90.0), &Matrix2::new(i, ZERO, ZERO, ONE), 1e-15));
    }

    proptest! {
        #[test]
        fn plates_are_unitary(theta in -360.0f64..360.0) {
            prop_assert!(unitary_error(&hwp_jones(theta)) < 1e-12);
            prop_assert!(unitary_error(&qwp_jones(theta)) < 1e-12);
            let h2 = hwp_jones(theta) * hwp_jones(theta);
            prop_assert!(equal_up_to_phase(&h2, &Jones::identity(), 1e-12));
            let q = qwp_jones(theta);
            prop_assert!(equal_up_to_phase(&(q * q * q * q), &Jones::identity(), 1e-12));
        }

        #[test]
        fn networks_are_unitary(angles in prop::array::uniform8(-180.0f64..180.0)) {
            let t = measurement_transfer(&MeasAngles(angles));
            prop_assert!((t.adjoint() * t - Matrix4::identity()).norm() < 1e-10);
            prop_assert!(measurement_povm(&MeasAngles(angles)).gram_error() < 1e-10);
            let prep = PrepAngles([angles[0], angles[1], angles[2], angles[3], angles[4], angles[5]]);
            let iso = preparation_isometry(&prep);
            for (c1, c2) in [(0, 0), (0, 1), (1, 1)] {
                let dot: Complex64 = iso.iter().map(|row| row[c1].conj() * row[c2]).sum();
                let want = if c1 == c2 { 1.0 } else { 0.0 };
                prop_assert!((dot - real(want)).norm() < 1e-10);
            }
            let psi = prepare_ansatz(&prep);
            prop_assert!((crate::pauli::norm_sq(psi.amplitudes()) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_angles_prepare_a_h() {
        let psi = prepare_ansatz(&PrepAngles([0.0; 6]));
        assert_abs_diff_eq!(psi.amplitudes()[0].norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hadamard_on_h1_splits_into_a_h_and_b_v() {
        // H1 = 22.5° sends |H⟩ to (|H⟩ + |V⟩)/√2; PBD1 routes it to |aH⟩ and
        // |bV⟩; Q1 gives bV a factor i, which H3 and Q3 at zero turn back into 1.
        let psi = prepare_ansatz(&PrepAngles([22.5, 0.0, 0.0, 0.0, 0.0, 0.0]));
        let a = psi.amplitudes();
        assert_abs_diff_eq!(a[0].norm_sqr(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(a[3].norm_sqr(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!((a[0] - real(S)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((a[3] - real(S)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_angles_measure_computational_basis() {
        let povm = measurement_povm(&MeasAngles([0.0; 8]));
        // D1..D4 ← aH, bV, bH, aV
        for (k, basis) in [0usize, 3, 2, 1].into_iter().enumerate() {
            let b = StateVector::basis(2, basis).unwrap();
            assert_abs_diff_eq!(povm.vectors[k].fidelity(&b), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn literal_bell_vector_gives_bell_povm_in_order() {
        let povm = measurement_povm(&bell_setting());
        for (v, b) in povm.vectors.iter().zip(bell_basis().iter()) {
            assert_abs_diff_eq!(v.fidelity(b), 1.0, epsilon = 1e-12);
        }
        let probs = povm.probabilities(&bell_basis()[0]);
        for (p, want) in probs.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*p, want, epsilon = 1e-12);
        }
        let probs = povm.probabilities(&StateVector::basis(2, 0).unwrap());
        for (p, want) in probs.iter().zip([0.0, 0.0, 0.5, 0.5]) {
            assert_abs_diff_eq!(*p, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn analyzer_maps_target_to_h() {
        let i = Complex64::new(0.0, 1.0);
        let targets = [
            [ONE, ZERO],
            [ZERO, ONE],
            [real(S), real(S)],
            [real(S), real(-S)],
            [real(S), i * S],
            [real(S), -i * S],
            [real(0.6), Complex64::new(0.48, 0.64)],
        ];
        for t in targets {
            let (q, h) = analyzer_angles(t);
            let out = analyzer(h, q) * Vector2::new(t[0], t[1]);
            assert_abs_diff_eq!(out[0].norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_bases_are_realized() {
        for path in [Pauli::X, Pauli::Y, Pauli::Z] {
            for pol in [Pauli::X, Pauli::Y, Pauli::Z] {
                let (mb, nb) = (path.eigenbasis(), pol.eigenbasis());
                let povm = measurement_povm(&product_basis_setting(mb, nb));
                let expected = [(0, 0), (1, 0), (0, 1), (1, 1)];
                for (v, (i, j)) in povm.vectors.iter().zip(expected) {
                    let target: Vec<Complex64> = (0..4).map(|idx| mb[i][idx >> 1] * nb[j][idx & 1]).collect();
                    let t = StateVector::new(target).unwrap();
                    assert_abs_diff_eq!(v.fidelity(&t), 1.0, epsilon = 1e-10);
                }
            }
        }
    }
}
