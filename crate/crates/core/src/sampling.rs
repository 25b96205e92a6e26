//! Deterministic quasi-random sampling of spheres, balls and shells in `C^n`.
//!
//! The base generator is the additive recurrence `x_k = frac(s + k * alpha)`
//! with `alpha_j = phi_d^{-j}`, where `phi_d` is the unique positive root of
//! `x^{d+1} = x + 1` (the "R_d" low-discrepancy sequence). The shift `s` is
//! drawn once from ChaCha8 seeded with the caller's seed, so a
//! `(dimension, seed, index)` triple always yields the same point.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cvector::CVector;

/// Low-discrepancy point generator on `[0,1)^d`.
#[derive(Debug, Clone)]
pub struct QuasiSequence {
    alpha: Vec<f64>,
    shift: Vec<f64>,
}

fn generalized_golden_ratio(d: usize) -> f64 {
    let mut x = 2.0f64;
    let p = 1.0 / (d as f64 + 1.0);
    for _ in 0..200 {
        x = (1.0 + x).powf(p);
    }
    x
}

impl QuasiSequence {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "sequence dimension must be positive");
        let g = generalized_golden_ratio(dim);
        let alpha = (1..=dim).map(|j| (1.0 / g.powi(j as i32)).fract()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.random::<f64>()).collect();
        Self { alpha, shift }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Writes the `k`-th point into `out` (length `dim`).
    pub fn fill(&self, k: u64, out: &mut [f64]) {
        for ((o, a), s) in out.iter_mut().zip(&self.alpha).zip(&self.shift) {
            // (k * a) mod 1 computed in two halves keeps the fractional part
            // accurate for large k.
            let hi = ((k >> 20) as f64 * a * (1u64 << 20) as f64).fract();
            let lo = ((k & 0xF_FFFF) as f64 * a).fract();
            *o = (s + hi + lo).fract();
        }
    }

    pub fn point(&self, k: u64) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim()];
        self.fill(k, &mut out);
        out
    }
}

/// Number of uniforms consumed by [`sphere_point`] for `C^n`.
pub fn sphere_dims(n: usize) -> usize {
    2 * n - 1
}

/// Maps `2n - 1` uniforms to a point of the sphere `||w|| = radius` in `C^n`,
/// uniformly with respect to surface measure: the squared moduli are the
/// spacings of the sorted first `n - 1` uniforms (uniform on the simplex) and
/// the phases are uniform.
pub fn sphere_point(n: usize, radius: f64, u: &[f64]) -> CVector {
    debug_assert_eq!(u.len(), sphere_dims(n));
    let mut cuts: Vec<f64> = u[..n - 1].to_vec();
    cuts.sort_by(f64::total_cmp);
    let mut prev = 0.0;
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        let next = if i + 1 < n { cuts[i] } else { 1.0 };
        let modulus = radius * (next - prev).max(0.0).sqrt();
        prev = next;
        let phase = 2.0 * PI * u[n - 1 + i];
        coords.push(Complex64::from_polar(modulus, phase));
    }
    CVector::new(coords).expect("finite sample")
}

/// Number of uniforms consumed by [`ball_point`] for `C^n`.
pub fn ball_dims(n: usize) -> usize {
    2 * n
}

/// Uniform point of the solid ball `||w|| < radius` in `C^n`.
pub fn ball_point(n: usize, radius: f64, u: &[f64]) -> CVector {
    debug_assert_eq!(u.len(), ball_dims(n));
    let rho = radius * u[2 * n - 1].powf(1.0 / (2 * n) as f64);
    sphere_point(n, rho, &u[..2 * n - 1])
}

/// Uniform point of the disc `|w| < radius`.
pub fn disk_point(radius: f64, u: &[f64]) -> Complex64 {
    Complex64::from_polar(radius * u[0].sqrt(), 2.0 * PI * u[1])
}

/// Number of uniforms consumed by [`polydisk_shell_point`] for `C^n`.
pub fn polydisk_shell_dims(n: usize) -> usize {
    2 * n
}

/// Uniform point of the polydisk shell `max_i |w_i| = radius`: a face
/// `|w_k| = radius` is picked uniformly (all faces have equal measure), then
/// the phase of `w_k` and the remaining coordinates in their discs.
pub fn polydisk_shell_point(n: usize, radius: f64, u: &[f64]) -> CVector {
    debug_assert_eq!(u.len(), polydisk_shell_dims(n));
    let face = ((u[0] * n as f64) as usize).min(n - 1);
    let mut coords = Vec::with_capacity(n);
    let mut next = 2;
    for i in 0..n {
        if i == face {
            coords.push(Complex64::from_polar(radius, 2.0 * PI * u[1]));
        } else {
            coords.push(disk_point(radius, &u[next..next + 2]));
            next += 2;
        }
    }
    CVector::new(coords).expect("finite sample")
}

/// Iterator over `count` quasi-uniform points of the sphere of `C^n`.
pub fn sphere_points(n: usize, radius: f64, count: usize, seed: u64) -> impl Iterator<Item = CVector> {
    let seq = QuasiSequence::new(sphere_dims(n), seed);
    let mut buf = alloc::vec![0.0; seq.dim()];
    (0..count as u64).map(move |k| {
        seq.fill(k, &mut buf);
        sphere_point(n, radius, &buf)
    })
}

/// Unit direction in `C^n` built from the ChaCha8 stream (used where true
/// pseudo-randomness, not low discrepancy, is wanted).
pub fn random_unit<R: Rng>(n: usize, rng: &mut R) -> CVector {
    let u: Vec<f64> = (0..sphere_dims(n)).map(|_| rng.random::<f64>()).collect();
    sphere_point(n, 1.0, &u)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
