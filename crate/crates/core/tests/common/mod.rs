#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::Rng;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(ch: char) -> M2 {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match ch {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        _ => panic!("bad label {ch}"),
    }
}

pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            m[r][col] = a[r / 2][col / 2] * b[r % 2][col % 2];
        }
    }
    m
}

pub fn string_matrix(s: &str) -> M4 {
    let ch: Vec<char> = s.chars().collect();
    kron(&pauli(ch[0]), &pauli(ch[1]))
}

pub fn hamiltonian_matrix(terms: &[(&str, f64)]) -> M4 {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for (s, w) in terms {
        let p = string_matrix(s);
        for r in 0..4 {
            for col in 0..4 {
                m[r][col] += p[r][col] * w;
            }
        }
    }
    m
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut m = [[c(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            m[r][col] = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    m
}

pub fn mul4(a: &M4, b: &M4) -> M4 {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            m[r][col] = (0..4).map(|k| a[r][k] * b[k][col]).sum();
        }
    }
    m
}

pub fn apply2(a: &M2, v: [C; 2]) -> [C; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn apply4(a: &M4, v: &[C]) -> Vec<C> {
    (0..4).map(|r| (0..4).map(|k| a[r][k] * v[k]).sum()).collect()
}

pub fn expectation(m: &M4, v: &[C]) -> f64 {
    let mv = apply4(m, v);
    let num: C = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    num.re / den
}

fn rotation(deg: f64) -> (M2, M2) {
    let (s, co) = deg.to_radians().sin_cos();
    let r = [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]];
    let rt = [[c(co, 0.0), c(s, 0.0)], [c(-s, 0.0), c(co, 0.0)]];
    (r, rt)
}

/// Wave plate as `R(θ) diag(1, e^{iφ}) R(−θ)`.
pub fn retarder(deg: f64, phase: C) -> M2 {
    let (r, rt) = rotation(deg);
    let d = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), phase]];
    mul2(&mul2(&r, &d), &rt)
}

pub fn hwp(deg: f64) -> M2 {
    retarder(deg, c(-1.0, 0.0))
}

pub fn qwp(deg: f64) -> M2 {
    retarder(deg, c(0.0, 1.0))
}

/// Amplitudes on `aH, aV, bH, bV` after the six preparation plates.
pub fn prepare(a: &[f64; 6]) -> Vec<C> {
    let split = apply2(&mul2(&qwp(a[1]), &hwp(a[0])), [c(1.0, 0.0), c(0.0, 0.0)]);
    let pa = apply2(&mul2(&qwp(a[3]), &hwp(a[2])), [split[0], c(0.0, 0.0)]);
    let pb = apply2(&mul2(&qwp(a[5]), &hwp(a[4])), [c(0.0, 0.0), split[1]]);
    vec![pa[0], pa[1], pb[0], pb[1]]
}

fn block(a: &M2, b: &M2) -> M4 {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..2 {
        for col in 0..2 {
            m[r][col] = a[r][col];
            m[r + 2][col + 2] = b[r][col];
        }
    }
    m
}

/// Detector amplitudes `D1..D4 = (1,H), (1,V), (2,H), (2,V)` as a linear
/// map of `aH, aV, bH, bV`.
pub fn transfer(a: &[f64; 8]) -> M4 {
    let first = block(&mul2(&hwp(a[0]), &qwp(a[1])), &mul2(&hwp(a[2]), &qwp(a[3])));
    let mut route = [[c(0.0, 0.0); 4]; 4];
    for (from, to) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
        route[to][from] = c(1.0, 0.0);
    }
    let last = block(&mul2(&hwp(a[4]), &qwp(a[5])), &mul2(&hwp(a[6]), &qwp(a[7])));
    mul4(&last, &mul4(&route, &first))
}

/// The state detected at each detector: the conjugated rows of the transfer map.
pub fn detector_states(a: &[f64; 8]) -> [Vec<C>; 4] {
    let t = transfer(a);
    std::array::from_fn(|k| t[k].iter().map(|x| x.conj()).collect())
}

/// `ψ⁺, ψ⁻, φ⁺, φ⁻` on `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn bell_states() -> [Vec<C>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        vec![c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)],
        vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)],
        vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)],
    ]
}

pub fn fidelity(a: &[C], b: &[C]) -> f64 {
    let ip: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    ip.norm_sqr() / (na * nb)
}

/// Normalized state with independent Gaussian real and imaginary parts.
pub fn random_state<R: Rng>(rng: &mut R) -> Vec<C> {
    let v: Vec<C> = (0..4)
        .map(|_| {
            let u1: f64 = rng.random::<f64>().max(1e-300);
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            let t = 2.0 * std::f64::consts::PI * u2;
            c(r * t.cos(), r * t.sin())
        })
        .collect();
    let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Smallest eigenvalue of a 4x4 Hermitian matrix, by power iteration on
/// `b I - m` where `b` bounds the spectrum.
pub fn lowest_eigenvalue(m: &M4) -> f64 {
    let bound: f64 = m.iter().flatten().map(|x| x.norm()).sum::<f64>() + 1.0;
    let mut shifted = *m;
    for (i, row) in shifted.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = if i == j { bound - *x } else { -*x };
        }
    }
    let mut v: Vec<C> = vec![c(0.3, 0.1), c(-0.5, 0.2), c(0.7, -0.4), c(0.2, 0.6)];
    let mut top = 0.0;
    for _ in 0..200_000 {
        let w = apply4(&shifted, &v);
        let n: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|x| x / n).collect();
        let next = expectation(&shifted, &v);
        let done = (next - top).abs() < 1e-15;
        top = next;
        if done {
            break;
        }
    }
    bound - top
}
