//! Brute-force three-qubit reference built from plain arrays, sharing no code
//! with the library's channel engine.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub type M2 = [[Complex64; 2]; 2];
pub type M4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub eps1: f64,
    pub chi: Complex64,
    pub eps2: f64,
    pub eps3: f64,
    pub xi: f64,
    pub alpha_prime: f64,
    pub cycles: usize,
}

impl Params {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        Params {
            eps1: rng.gen_range(-1.0..=1.0),
            chi: Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..TAU)),
            eps2: rng.gen_range(0.0..=0.9),
            eps3: rng.gen_range(0.0..=0.9),
            xi: rng.gen_range(0.0..=1.0),
            alpha_prime: rng.gen_range(0.0..TAU),
            cycles: rng.gen_range(0..=30),
        }
    }

    pub fn target(&self) -> M2 {
        let s = (1.0 - self.eps1 * self.eps1).sqrt();
        let lower = self.chi * (0.5 * s);
        [
            [Complex64::new((1.0 + self.eps1) / 2.0, 0.0), lower.conj()],
            [lower, Complex64::new((1.0 - self.eps1) / 2.0, 0.0)],
        ]
    }

    pub fn reset_pair(&self) -> M4 {
        let mut r = [[ZERO; 4]; 4];
        let (a, b) = (self.eps2, self.eps3);
        for (i, (sa, sb)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].iter().enumerate() {
            r[i][i] = Complex64::new((1.0 + sa * a) * (1.0 + sb * b) / 4.0, 0.0);
        }
        let mag = self.xi / 4.0 * ((1.0 - a * a) * (1.0 - b * b)).sqrt();
        r[0][3] = Complex64::from_polar(mag, -self.alpha_prime);
        r[3][0] = r[0][3].conj();
        r
    }
}

/// Swap of |011> and |100>, everything else fixed.
fn relabel(i: usize) -> usize {
    match i {
        3 => 4,
        4 => 3,
        other => other,
    }
}

/// Attach the pair, apply the compression permutation, trace the pair out.
/// Linear in `target`, so it also acts on non-density inputs.
pub fn cycle(target: &M2, pair: &M4) -> M2 {
    let mut joint = [[ZERO; 8]; 8];
    for t in 0..2 {
        for u in 0..2 {
            for r in 0..4 {
                for s in 0..4 {
                    joint[4 * t + r][4 * u + s] = target[t][u] * pair[r][s];
                }
            }
        }
    }
    let mut out = [[ZERO; 2]; 2];
    for t in 0..2 {
        for u in 0..2 {
            for r in 0..4 {
                out[t][u] += joint[relabel(4 * t + r)][relabel(4 * u + r)];
            }
        }
    }
    out
}

pub fn cycles(target: &M2, pair: &M4, n: usize) -> M2 {
    (0..n).fold(*target, |acc, _| cycle(&acc, pair))
}

/// Column-stacked propagator of `n` cycles, column `j` is `vec(cycles(E_j))`.
pub fn propagator(pair: &M4, n: usize) -> [[Complex64; 4]; 4] {
    let mut phi = [[ZERO; 4]; 4];
    let one = Complex64::new(1.0, 0.0);
    // E_j for j = (row + 2 col)
    for j in 0..4 {
        let mut e = [[ZERO; 2]; 2];
        e[j % 2][j / 2] = one;
        let out = cycles(&e, pair, n);
        for i in 0..4 {
            phi[i][j] = out[i % 2][i / 2];
        }
    }
    phi
}

pub fn max_gap_m2(a: &M2, b: &nalgebra::DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn max_gap_m4(a: &[[Complex64; 4]; 4], b: &nalgebra::DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn config(p: &Params) -> cohcool::hbac::HbacConfig {
    cohcool::hbac::HbacConfig::new(p.eps1, p.eps2, p.eps3, p.xi, p.alpha_prime, p.cycles)
        .and_then(|c| c.with_target_coherence(p.chi))
        .expect("sampled parameters are in range")
}
