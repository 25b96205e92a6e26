//! Carathéodory pseudodistance on the unit ball and the unit polydisk.
//!
//! Only `tanh c` is ever needed by the invariants; [`DistanceValue`] converts
//! to `c` itself when a caller wants an additive distance.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::cvector::{CVector, ModelDomain, ModelKind};
use crate::error::{Error, Result};

/// Largest `tanh c` for which `c` is reported unsaturated.
const SATURATION: f64 = 1.0 - 1e-15;

/// A Carathéodory distance given by `tanh c` together with `c = atanh(tanh c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceValue {
    pub tanh_c: f64,
    pub c: f64,
    /// `tanh_c` was too close to 1 for `atanh` to be finite; `c` is capped.
    pub saturated: bool,
}

impl DistanceValue {
    pub fn from_tanh(tanh_c: f64) -> Self {
        let t = tanh_c.clamp(0.0, 1.0);
        let saturated = t > SATURATION;
        let c = t.min(SATURATION).atanh();
        Self {
            tanh_c: t,
            c,
            saturated,
        }
    }
}

/// Möbius pseudodistance of the unit disc, `|(z - a) / (1 - conj(a) z)|`.
pub fn mobius(a: Complex64, z: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - a.conj() * z).norm();
    ((z - a).norm() / den).min(1.0)
}

fn check_inside(d: &ModelDomain, label: &str, z: &CVector) -> Result<()> {
    z.check_dim(d.dim)?;
    if d.gauge(z) >= 1.0 {
        return Err(Error::OutsideDomain(alloc::format!(
            "{label} has Minkowski norm {} >= 1",
            d.gauge(z)
        )));
    }
    Ok(())
}

/// `tanh c_{B^n}(a, z) = [1 - (1-||a||^2)(1-||z||^2) / |1 - <z,a>|^2]^{1/2}`.
///
/// The numerator of the bracket, `|1-<z,a>|^2 - (1-||a||^2)(1-||z||^2)`, is
/// evaluated as `||a-z||^2 - sum_{j<k} |a_j z_k - a_k z_j|^2` so that nearby
/// points keep full relative accuracy.
pub fn tanh_c_ball(a: &CVector, z: &CVector) -> Result<f64> {
    let ball = ModelDomain::ball(a.dim());
    check_inside(&ball, "a", a)?;
    check_inside(&ball, "z", z)?;
    Ok(ball_unchecked(a, z))
}

pub(crate) fn ball_unchecked(a: &CVector, z: &CVector) -> f64 {
    let (ac, zc) = (a.coords(), z.coords());
    let n = ac.len();
    let mut num: f64 = ac.iter().zip(zc).map(|(x, y)| (x - y).norm_sqr()).sum();
    for j in 0..n {
        for k in j + 1..n {
            num -= (ac[j] * zc[k] - ac[k] * zc[j]).norm_sqr();
        }
    }
    let den = (Complex64::new(1.0, 0.0) - z.dot(a)).norm_sqr();
    (num.max(0.0) / den).sqrt().min(1.0)
}

/// `tanh c_{D^n}(a, z) = max_i |(z_i - a_i) / (1 - conj(a_i) z_i)|`.
pub fn tanh_c_polydisk(a: &CVector, z: &CVector) -> Result<f64> {
    let poly = ModelDomain::polydisk(a.dim());
    check_inside(&poly, "a", a)?;
    check_inside(&poly, "z", z)?;
    Ok(polydisk_unchecked(a, z))
}

pub(crate) fn polydisk_unchecked(a: &CVector, z: &CVector) -> f64 {
    a.coords()
        .iter()
        .zip(z.coords())
        .map(|(&ai, &zi)| mobius(ai, zi))
        .fold(0.0, f64::max)
}

pub fn tanh_c(d: &ModelDomain, a: &CVector, z: &CVector) -> Result<f64> {
    a.check_dim(d.dim)?;
    match d.kind {
        ModelKind::Ball => tanh_c_ball(a, z),
        ModelKind::Polydisk => tanh_c_polydisk(a, z),
    }
}

pub(crate) fn tanh_c_unchecked(d: &ModelDomain, a: &CVector, z: &CVector) -> f64 {
    match d.kind {
        ModelKind::Ball => ball_unchecked(a, z),
        ModelKind::Polydisk => polydisk_unchecked(a, z),
    }
}

pub fn distance(d: &ModelDomain, a: &CVector, z: &CVector) -> Result<DistanceValue> {
    tanh_c(d, a, z).map(DistanceValue::from_tanh)
}

/// The involutive automorphism `phi_a` of `B^n` exchanging `a` and `0`:
/// `phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>)`, `s_a = sqrt(1-||a||^2)`.
///
/// `||phi_a(z)|| = tanh c_{B^n}(a, z)`.
pub fn ball_automorphism(a: &CVector, z: &CVector) -> Result<CVector> {
    let ball = ModelDomain::ball(a.dim());
    check_inside(&ball, "a", a)?;
    z.check_dim(a.dim())?;
    Ok(automorphism_unchecked(a, z))
}

pub(crate) fn automorphism_unchecked(a: &CVector, z: &CVector) -> CVector {
    let a2 = a.norm_sqr();
    let za = z.dot(a);
    let den = Complex64::new(1.0, 0.0) - za;
    if a2 == 0.0 {
        return z.scale_real(-1.0);
    }
    let s = (1.0 - a2).sqrt();
    // P_a z = (<z,a>/||a||^2) a, Q_a z = z - P_a z
    let proj = a.scale(za / a2);
    let coords = a
        .coords()
        .iter()
        .zip(proj.coords())
        .zip(z.coords())
        .map(|((ai, pi), zi)| (ai - pi - s * (zi - pi)) / den)
        .collect();
    CVector::new(coords).expect("automorphism of a finite point is finite")
}
