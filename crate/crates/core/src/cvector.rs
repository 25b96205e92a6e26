//! Points of `C^n` and the two model domains (unit ball, unit polydisk).

use alloc::vec::Vec;
use core::ops::{Add, Index, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{bail_param, Error, Result};

/// A point `z = (z_1, ..., z_n)` of `C^n` with finite coordinates, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>"))]
pub struct CVector {
    coords: Vec<Complex64>,
}

impl CVector {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    /// Builds a vector from real coordinates (all imaginary parts zero).
    pub fn from_real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a vector from interleaved `(re, im)` pairs.
    pub fn from_re_im(xs: &[f64]) -> Result<Self> {
        if !xs.len().is_multiple_of(2) {
            bail_param!("odd number of real coordinates ({})", xs.len());
        }
        Self::new(xs.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            coords: alloc::vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// The standard basis vector `e_k` (0-based).
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    /// Interleaved `(re, im)` coordinates, `2n` reals.
    pub fn to_re_im(&self) -> Vec<f64> {
        self.coords.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Euclidean norm `||z||`.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `max_i |z_i|`.
    pub fn max_modulus(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of the coordinate moduli, the norm dual to `max_modulus`.
    pub fn l1_norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).sum()
    }

    /// `<self, other> = sum_j self_j * conj(other_j)`, linear in `self`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords.iter().zip(&other.coords).map(|(z, a)| z * a.conj()).sum()
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * lambda).collect(),
        }
    }

    pub fn scale_real(&self, t: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * t).collect(),
        }
    }

    /// `self + t * dir`.
    pub fn add_scaled(&self, t: Complex64, dir: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&dir.coords).map(|(a, d)| a + t * d).collect(),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Complex64>> for CVector {
    type Error = Error;

    fn try_from(coords: Vec<Complex64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<CVector> for Vec<Complex64> {
    fn from(v: CVector) -> Self {
        v.coords
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.coords[i]
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        CVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        CVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ModelKind {
    Ball,
    Polydisk,
}

/// The ambient domain `Omega`: the unit ball `B^n` or the unit polydisk `D^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelDomain {
    pub kind: ModelKind,
    pub dim: usize,
}

impl ModelDomain {
    pub fn new(kind: ModelKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            bail_param!("model domain dimension must be positive");
        }
        Ok(Self { kind, dim })
    }

    pub fn ball(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            kind: ModelKind::Ball,
            dim,
        }
    }

    pub fn polydisk(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            kind: ModelKind::Polydisk,
            dim,
        }
    }

    /// Minkowski functional without the dimension check.
    pub(crate) fn gauge(&self, z: &CVector) -> f64 {
        match self.kind {
            ModelKind::Ball => z.norm(),
            ModelKind::Polydisk => z.max_modulus(),
        }
    }

    /// Shorthand for `contains(self, z, 1.0)` that ignores dimension errors.
    pub fn holds(&self, z: &CVector) -> bool {
        z.dim() == self.dim && self.gauge(z) < 1.0
    }
}

/// `sum_j z_j * conj(a_j)`, i.e. the pairing `<z, a>`.
pub fn hermitian_inner(a: &CVector, z: &CVector) -> Result<Complex64> {
    z.check_dim(a.dim())?;
    Ok(z.dot(a))
}

/// The Minkowski functional `rho_Omega(z)`: `||z||` on the ball, `max |z_i|`
/// on the polydisk.
pub fn minkowski(d: &ModelDomain, z: &CVector) -> Result<f64> {
    z.check_dim(d.dim)?;
    Ok(d.gauge(z))
}

/// Strict membership in the `rho_Omega`-ball of the given radius.
pub fn contains(d: &ModelDomain, z: &CVector, radius: f64) -> Result<bool> {
    if !(radius > 0.0 && radius <= 1.0) {
        bail_param!("radius {radius} not in (0, 1]");
    }
    Ok(minkowski(d, z)? < radius)
}
