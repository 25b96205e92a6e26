//! The set functional `d^S(z) = min_{w in S} tanh c_Omega(z, w)`.
//!
//! Closed forms are used where they exist. Everything else goes through a
//! seeded grid over the set's natural parameterization followed by a
//! derivative-free pattern search from the best seeds. [`grid_min_oracle`]
//! is an independent brute-force upper bound used to cross-check both.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::caratheodory::{automorphism_unchecked, mobius, tanh_c_unchecked};
use crate::cvector::{CVector, ModelDomain, ModelKind};
use crate::error::{bail_param, Error, Result};
use crate::sampling::{self, QuasiSequence};

/// Default number of grid seeds for numerical minimization.
pub const DEFAULT_BUDGET: usize = 10_000;
/// Smallest accepted grid budget.
pub const MIN_BUDGET: usize = 1_000;
/// Default sample count for [`grid_min_oracle`].
pub const DEFAULT_ORACLE_SAMPLES: usize = 100_000;
/// Agreement tolerance between a closed form and the sampling oracle.
pub const ORACLE_TOLERANCE: f64 = 2e-3;
/// Distance below which a point is considered to lie on the set.
pub const ON_SET_TOLERANCE: f64 = 1e-12;

/// Number of best grid seeds handed to the local search.
const REFINE_SEEDS: usize = 4;
/// Evaluation cap for one local search.
const REFINE_EVALS: usize = 40_000;
/// Step contraction between polling rounds.
const SHRINK: f64 = 0.5;
/// Smallest step, relative to the initial one.
const MIN_STEP_RATIO: f64 = 1e-10;

/// The complex affine hyperplane `{w : <w - p, v> = 0}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct Hyperplane {
    pub base_point: CVector,
    pub normal: CVector,
}

impl Hyperplane {
    pub fn new(base_point: CVector, normal: CVector) -> Result<Self> {
        normal.check_dim(base_point.dim())?;
        if normal.norm() == 0.0 {
            bail_param!("hyperplane normal must be nonzero");
        }
        Ok(Self { base_point, normal })
    }

    pub fn dim(&self) -> usize {
        self.base_point.dim()
    }

    /// `<w - p, v>`.
    pub fn offset(&self, w: &CVector) -> Complex64 {
        w.dot(&self.normal) - self.base_point.dot(&self.normal)
    }

    /// Euclidean distance from `w` to the hyperplane.
    pub fn euclidean_distance(&self, w: &CVector) -> f64 {
        self.offset(w).norm() / self.normal.norm()
    }

    /// The point of the hyperplane nearest to the origin.
    pub fn foot(&self) -> CVector {
        let v2 = self.normal.norm_sqr();
        self.normal.scale(self.base_point.dot(&self.normal) / v2)
    }

    /// Orthonormal basis of the complex orthogonal complement of the normal.
    pub fn tangent_basis(&self) -> Vec<CVector> {
        let n = self.dim();
        let unit = self.normal.scale_real(1.0 / self.normal.norm());
        let mut basis: Vec<CVector> = alloc::vec![unit];
        for k in 0..n {
            let mut e = CVector::basis(n, k);
            for b in &basis {
                let c = e.dot(b);
                e = e.add_scaled(-c, b);
            }
            let len = e.norm();
            if len > 1e-8 {
                basis.push(e.scale_real(1.0 / len));
            }
            if basis.len() == n {
                break;
            }
        }
        basis.remove(0);
        basis
    }

    /// Whether the hyperplane meets the open model domain.
    pub fn meets(&self, omega: &ModelDomain) -> bool {
        // rho-distance from 0 to the plane: |<p,v>| / ||v||_*, with the dual
        // norm l2 for the ball and l1 for the polydisk.
        let dual = match omega.kind {
            ModelKind::Ball => self.normal.norm(),
            ModelKind::Polydisk => self.normal.l1_norm(),
        };
        self.base_point.dot(&self.normal).norm() / dual < 1.0
    }
}

/// The deleted set `S`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "camelCase"))]
pub enum SetKind {
    /// `{||w|| = r}`.
    SphereShell {
        r: f64,
    },
    /// `{max_i |w_i| = r}`.
    PolydiskShell {
        r: f64,
    },
    /// `{||w|| = r} \ B(cap_center, cap_radius)` with an open Euclidean cap.
    #[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
    SphereShellMinusCap {
        r: f64,
        cap_center: CVector,
        cap_radius: f64,
    },
    HyperplaneArrangement {
        planes: Vec<Hyperplane>,
    },
    /// Hyperplanes `{w_1 = p}` for each listed `p`.
    VerticalHyperplanes {
        values: Vec<Complex64>,
    },
    PointSet {
        points: Vec<CVector>,
    },
}

impl SetKind {
    /// Short identifier used in labels.
    pub fn name(&self) -> &'static str {
        match self {
            Self::SphereShell { .. } => "sphereShell",
            Self::PolydiskShell { .. } => "polydiskShell",
            Self::SphereShellMinusCap { .. } => "sphereShellMinusCap",
            Self::HyperplaneArrangement { .. } => "hyperplaneArrangement",
            Self::VerticalHyperplanes { .. } => "verticalHyperplanes",
            Self::PointSet { .. } => "pointSet",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundarySet {
    pub dim: usize,
    pub kind: SetKind,
}

impl BoundarySet {
    fn checked(dim: usize, kind: SetKind) -> Result<Self> {
        let s = Self { dim, kind };
        s.validate()?;
        Ok(s)
    }

    pub fn sphere_shell(dim: usize, r: f64) -> Result<Self> {
        Self::checked(dim, SetKind::SphereShell { r })
    }

    pub fn polydisk_shell(dim: usize, r: f64) -> Result<Self> {
        Self::checked(dim, SetKind::PolydiskShell { r })
    }

    pub fn shell_minus_cap(r: f64, cap_center: CVector, cap_radius: f64) -> Result<Self> {
        Self::checked(
            cap_center.dim(),
            SetKind::SphereShellMinusCap {
                r,
                cap_center,
                cap_radius,
            },
        )
    }

    /// The shell `||w|| = r` minus the cap of radius `eps` around
    /// `Q = (0, ..., 0, r)`.
    pub fn shell_minus_north_cap(dim: usize, r: f64, eps: f64) -> Result<Self> {
        if dim == 0 {
            bail_param!("dimension must be positive");
        }
        let mut q = alloc::vec![Complex64::new(0.0, 0.0); dim];
        q[dim - 1] = Complex64::new(r, 0.0);
        Self::shell_minus_cap(r, CVector::new(q)?, eps)
    }

    pub fn hyperplanes(planes: Vec<Hyperplane>) -> Result<Self> {
        let dim = planes.first().ok_or(Error::EmptySet)?.dim();
        Self::checked(dim, SetKind::HyperplaneArrangement { planes })
    }

    pub fn vertical_hyperplanes(dim: usize, values: Vec<Complex64>) -> Result<Self> {
        Self::checked(dim, SetKind::VerticalHyperplanes { values })
    }

    pub fn points(points: Vec<CVector>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptySet)?.dim();
        Self::checked(dim, SetKind::PointSet { points })
    }

    /// Checks the invariants that do not depend on the ambient domain.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            bail_param!("set dimension must be positive");
        }
        match &self.kind {
            SetKind::SphereShell { r } | SetKind::PolydiskShell { r } => check_radius(*r),
            SetKind::SphereShellMinusCap {
                r,
                cap_center,
                cap_radius,
            } => {
                check_radius(*r)?;
                cap_center.check_dim(self.dim)?;
                if (cap_center.norm() - r).abs() > 1e-12 {
                    bail_param!("cap center has norm {}, expected {r}", cap_center.norm());
                }
                if !(*cap_radius > 0.0) {
                    bail_param!("cap radius must be positive");
                }
                // The farthest shell point from Q is -Q at distance 2r.
                if *cap_radius > 2.0 * r {
                    bail_param!("cap of radius {cap_radius} swallows the shell of radius {r}");
                }
                Ok(())
            }
            SetKind::HyperplaneArrangement { planes } => {
                if planes.is_empty() {
                    return Err(Error::EmptySet);
                }
                for h in planes {
                    h.base_point.check_dim(self.dim)?;
                    h.normal.check_dim(self.dim)?;
                    if h.normal.norm() == 0.0 {
                        bail_param!("hyperplane normal must be nonzero");
                    }
                }
                Ok(())
            }
            SetKind::VerticalHyperplanes { values } => {
                if values.is_empty() {
                    return Err(Error::EmptySet);
                }
                if values.iter().any(|p| !(p.norm() < 1.0)) {
                    bail_param!("vertical hyperplane w_1 = p needs |p| < 1");
                }
                Ok(())
            }
            SetKind::PointSet { points } => {
                if points.is_empty() {
                    return Err(Error::EmptySet);
                }
                points.iter().try_for_each(|p| p.check_dim(self.dim))
            }
        }
    }

    /// Checks that the set is a nonempty subset of `omega` as required.
    pub fn validate_in(&self, omega: &ModelDomain) -> Result<()> {
        self.validate()?;
        if omega.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: omega.dim,
                found: self.dim,
            });
        }
        match (&self.kind, omega.kind) {
            (SetKind::PolydiskShell { r }, ModelKind::Ball) => {
                if r * (self.dim as f64).sqrt() >= 1.0 {
                    bail_param!(
                        "polydisk shell of radius {r} is not inside B^{} (needs r < 1/sqrt(n))",
                        self.dim
                    );
                }
            }
            (SetKind::HyperplaneArrangement { planes }, _) => {
                if let Some(i) = planes.iter().position(|h| !h.meets(omega)) {
                    bail_param!("hyperplane {i} misses the domain");
                }
            }
            (SetKind::PointSet { points }, _) => {
                if let Some(i) = points.iter().position(|p| !omega.holds(p)) {
                    bail_param!("point {i} lies outside the domain");
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether `w` lies on the set, up to `tol` in the natural defining
    /// function (Euclidean distance for points and planes).
    pub fn contains_point(&self, w: &CVector, tol: f64) -> bool {
        match &self.kind {
            SetKind::SphereShell { r } => (w.norm() - r).abs() <= tol,
            SetKind::PolydiskShell { r } => (w.max_modulus() - r).abs() <= tol,
            SetKind::SphereShellMinusCap {
                r,
                cap_center,
                cap_radius,
            } => (w.norm() - r).abs() <= tol && w.distance(cap_center) >= cap_radius - tol,
            SetKind::HyperplaneArrangement { planes } => planes.iter().any(|h| h.euclidean_distance(w) <= tol),
            SetKind::VerticalHyperplanes { values } => values.iter().any(|p| (w[0] - p).norm() <= tol),
            SetKind::PointSet { points } => points.iter().any(|p| p.distance(w) <= tol),
        }
    }

    /// The vertical planes written as general hyperplanes.
    fn vertical_as_planes(&self, values: &[Complex64]) -> Vec<Hyperplane> {
        values
            .iter()
            .map(|&p| {
                let mut base = CVector::zeros(self.dim);
                base = base.add_scaled(p, &CVector::basis(self.dim, 0));
                Hyperplane {
                    base_point: base,
                    normal: CVector::basis(self.dim, 0),
                }
            })
            .collect()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        bail_param!("shell radius {r} not in (0, 1)");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub enum Method {
    ClosedForm,
    GridRefine,
    Sampling,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinimizerResult {
    pub value: f64,
    pub argmin: CVector,
    pub method: Method,
    /// Objective evaluations spent (0 for closed forms).
    pub samples: usize,
    /// False when a local search ran out of evaluations before its step
    /// shrank to the floor; `value` is then the best point found.
    pub converged: bool,
}

impl MinimizerResult {
    fn closed(value: f64, argmin: CVector) -> Self {
        Self {
            value,
            argmin,
            method: Method::ClosedForm,
            samples: 0,
            converged: true,
        }
    }
}

fn check_point(omega: &ModelDomain, z: &CVector) -> Result<()> {
    z.check_dim(omega.dim)?;
    if !omega.holds(z) {
        return Err(Error::OutsideDomain(alloc::format!(
            "z has Minkowski norm {} >= 1",
            omega.gauge(z)
        )));
    }
    Ok(())
}

fn check_budget(budget: usize) -> Result<()> {
    if budget < MIN_BUDGET {
        bail_param!("budget {budget} below the minimum {MIN_BUDGET}");
    }
    Ok(())
}

/// Radial projection of `z` onto `{||w|| = r}`; `e_1`-direction for `z = 0`.
fn radial(z: &CVector, r: f64) -> CVector {
    let nz = z.norm();
    if nz == 0.0 {
        CVector::basis(z.dim(), 0).scale_real(r)
    } else {
        z.scale_real(r / nz)
    }
}

/// `d^{||w||=r}(z)` in the ball: `|‖z‖ - r| / (1 - r‖z‖)`.
pub fn dist_sphere_in_ball(z: &CVector, r: f64) -> Result<f64> {
    check_point(&ModelDomain::ball(z.dim()), z)?;
    check_radius(r)?;
    let t = z.norm();
    Ok((t - r).abs() / (1.0 - r * t))
}

/// `d^{max|w_i|=r}(z)` in the polydisk.
///
/// Outside the closed `r`-polydisk this is
/// `max_i (max{|z_i|, r} - r) / (1 - r|z_i|)`; inside it is found
/// numerically.
pub fn dist_polydisk_shell_in_polydisk(z: &CVector, r: f64) -> Result<f64> {
    let omega = ModelDomain::polydisk(z.dim());
    let set = BoundarySet::polydisk_shell(z.dim(), r)?;
    dist_generic(&omega, z, &set, DEFAULT_BUDGET).map(|m| m.value)
}

fn polydisk_shell_closed(z: &CVector, r: f64) -> MinimizerResult {
    let value = z
        .coords()
        .iter()
        .map(|c| (c.norm().max(r) - r) / (1.0 - r * c.norm()))
        .fold(0.0, f64::max);
    let argmin = CVector::new(
        z.coords()
            .iter()
            .map(|&c| if c.norm() > r { c * (r / c.norm()) } else { c })
            .collect(),
    )
    .expect("finite");
    MinimizerResult::closed(value, argmin)
}

fn unit_phase(c: Complex64) -> Complex64 {
    let m = c.norm();
    if m == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        c / m
    }
}

/// Puts moduli `x` on the phases of `z`.
fn align_phases(z: &CVector, x: &[f64]) -> CVector {
    CVector::new(z.coords().iter().zip(x).map(|(&c, &m)| unit_phase(c) * m).collect()).expect("finite")
}

/// `d^{||w||=r}(z)` in the polydisk, minimizing
/// `max_i ||z_i| - |w_i|| / (1 - |w_i||z_i|)` over the moduli of the sphere.
pub fn dist_sphere_in_polydisk(z: &CVector, r: f64, budget: usize) -> Result<MinimizerResult> {
    let omega = ModelDomain::polydisk(z.dim());
    check_point(&omega, z)?;
    check_radius(r)?;
    check_budget(budget)?;
    let set = BoundarySet::sphere_shell(z.dim(), r)?;
    if set.contains_point(z, ON_SET_TOLERANCE) {
        return Ok(MinimizerResult::closed(0.0, z.clone()));
    }
    let moduli: Vec<f64> = z.coords().iter().map(|c| c.norm()).collect();
    let chart = ModuliChart {
        n: z.dim(),
        r,
        shell: ModelKind::Ball,
    };
    let objective = |x: &[f64]| {
        let w = chart.moduli(x)?;
        Some(
            moduli
                .iter()
                .zip(&w)
                .map(|(&a, &b)| (a - b).abs() / (1.0 - a * b))
                .fold(0.0, f64::max),
        )
    };
    let run = minimize(&chart, &objective, budget);
    let w = align_phases(z, &chart.moduli(&run.x).expect("accepted point"));
    Ok(finish(&omega, z, w, run))
}

/// `d^{max|w_i|=r}(z)` in the ball, minimizing
/// `[1 - (1-||w||^2)(1-||z||^2) / (1 - sum |z_i||w_i|)^2]^{1/2}` over the
/// moduli of the polydisk shell. Requires `r < 1/sqrt(n)`.
pub fn dist_polydisk_shell_in_ball(z: &CVector, r: f64, budget: usize) -> Result<MinimizerResult> {
    let omega = ModelDomain::ball(z.dim());
    check_point(&omega, z)?;
    check_budget(budget)?;
    let set = BoundarySet::polydisk_shell(z.dim(), r)?;
    set.validate_in(&omega)?;
    if set.contains_point(z, ON_SET_TOLERANCE) {
        return Ok(MinimizerResult::closed(0.0, z.clone()));
    }
    let moduli: Vec<f64> = z.coords().iter().map(|c| c.norm()).collect();
    let z2 = z.norm_sqr();
    let chart = ModuliChart {
        n: z.dim(),
        r,
        shell: ModelKind::Polydisk,
    };
    let objective = |x: &[f64]| {
        let w = chart.moduli(x)?;
        let w2: f64 = w.iter().map(|t| t * t).sum();
        let pair: f64 = moduli.iter().zip(&w).map(|(a, b)| a * b).sum();
        let bracket = 1.0 - (1.0 - w2) * (1.0 - z2) / ((1.0 - pair) * (1.0 - pair));
        Some(bracket.max(0.0).sqrt())
    };
    let run = minimize(&chart, &objective, budget);
    let w = align_phases(z, &chart.moduli(&run.x).expect("accepted point"));
    Ok(finish(&omega, z, w, run))
}

/// Distance in the ball to a union of complex affine hyperplanes.
///
/// For each plane `H = {<w-p, v> = 0}` the automorphism `phi_z` carries
/// `H ∩ B^n` onto `{<u, c> = k} ∩ B^n` with
/// `c = P_z v + s_z Q_z v - conj(<p,v>) z` and `k = <z-p, v>`, so the
/// distance is the Euclidean distance `|k| / ||c||` from the origin and the
/// minimizer is `phi_z((k/||c||^2) c)`. For `z = 0` this is
/// `|<p,v>| / ||v||`.
pub fn dist_hyperplanes_in_ball(z: &CVector, planes: &[Hyperplane]) -> Result<MinimizerResult> {
    let omega = ModelDomain::ball(z.dim());
    check_point(&omega, z)?;
    let set = BoundarySet::hyperplanes(planes.to_vec())?;
    set.validate_in(&omega)?;
    hyperplanes_min(&omega, z, planes)
}

fn hyperplanes_min(omega: &ModelDomain, z: &CVector, planes: &[Hyperplane]) -> Result<MinimizerResult> {
    let mut best: Option<MinimizerResult> = None;
    for h in planes {
        let cand = match plane_closed_form(z, h) {
            Some(m) => m,
            None => plane_numeric(omega, z, h, DEFAULT_BUDGET),
        };
        if best.as_ref().is_none_or(|b| cand.value < b.value) {
            best = Some(cand);
        }
    }
    best.ok_or(Error::EmptySet)
}

fn plane_closed_form(z: &CVector, h: &Hyperplane) -> Option<MinimizerResult> {
    if h.euclidean_distance(z) <= ON_SET_TOLERANCE {
        return Some(MinimizerResult::closed(0.0, z.clone()));
    }
    let v = &h.normal;
    let z2 = z.norm_sqr();
    let s = (1.0 - z2).sqrt();
    let pv = h.base_point.dot(v);
    // P_z v = (<v,z>/||z||^2) z
    let proj = if z2 == 0.0 {
        CVector::zeros(z.dim())
    } else {
        z.scale(v.dot(z) / z2)
    };
    let q = v - &proj;
    let c = (&proj + &q.scale_real(s)).add_scaled(-pv.conj(), z);
    let k = h.offset(z);
    let c2 = c.norm_sqr();
    if c2 == 0.0 {
        return None;
    }
    let value = k.norm() / c2.sqrt();
    if !(value < 1.0) {
        return None;
    }
    let foot = c.scale(k / c2);
    let argmin = automorphism_unchecked(z, &foot);
    Some(MinimizerResult::closed(value, argmin))
}

fn plane_numeric(omega: &ModelDomain, z: &CVector, h: &Hyperplane, budget: usize) -> MinimizerResult {
    if z.dim() == 1 {
        let w = h.foot();
        let value = tanh_c_unchecked(omega, z, &w);
        return MinimizerResult {
            value,
            argmin: w,
            method: Method::GridRefine,
            samples: 1,
            converged: true,
        };
    }
    let chart = PlaneChart::new(omega, h);
    let objective = |x: &[f64]| chart.point(x).map(|w| tanh_c_unchecked(omega, z, &w));
    let run = minimize(&chart, &objective, budget);
    let w = chart.point(&run.x).expect("accepted point");
    finish(omega, z, w, run)
}

fn vertical_in_polydisk(z: &CVector, values: &[Complex64]) -> MinimizerResult {
    let (i, value) = values
        .iter()
        .map(|&p| mobius(p, z[0]))
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let mut coords = z.coords().to_vec();
    coords[0] = values[i];
    MinimizerResult::closed(value, CVector::new(coords).expect("finite"))
}

fn points_enumerated(omega: &ModelDomain, z: &CVector, points: &[CVector]) -> MinimizerResult {
    let (i, value) = points
        .iter()
        .map(|p| tanh_c_unchecked(omega, z, p))
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    MinimizerResult {
        value,
        argmin: points[i].clone(),
        method: Method::ClosedForm,
        samples: points.len(),
        converged: true,
    }
}

/// `d^S(z)` for any supported pair `(Omega, S)`: closed form when available,
/// grid seeding plus local refinement otherwise.
pub fn dist_generic(omega: &ModelDomain, z: &CVector, set: &BoundarySet, budget: usize) -> Result<MinimizerResult> {
    check_point(omega, z)?;
    check_budget(budget)?;
    set.validate_in(omega)?;
    if set.contains_point(z, ON_SET_TOLERANCE) {
        return Ok(MinimizerResult::closed(0.0, z.clone()));
    }
    match (&set.kind, omega.kind) {
        (SetKind::SphereShell { r }, ModelKind::Ball) => {
            Ok(MinimizerResult::closed(dist_sphere_in_ball(z, *r)?, radial(z, *r)))
        }
        (SetKind::SphereShell { r }, ModelKind::Polydisk) => dist_sphere_in_polydisk(z, *r, budget),
        (SetKind::PolydiskShell { r }, ModelKind::Polydisk) => {
            if z.max_modulus() > *r {
                Ok(polydisk_shell_closed(z, *r))
            } else {
                grid_refine(omega, z, set, budget)
            }
        }
        (SetKind::PolydiskShell { r }, ModelKind::Ball) => dist_polydisk_shell_in_ball(z, *r, budget),
        (
            SetKind::SphereShellMinusCap {
                r,
                cap_center,
                cap_radius,
            },
            ModelKind::Ball,
        ) => {
            // The unconstrained minimizer over the whole shell is the radial
            // point (unique for z != 0); if it survives the cap it is optimal.
            let w = if z.norm() == 0.0 {
                cap_center.scale_real(-1.0)
            } else {
                radial(z, *r)
            };
            if w.distance(cap_center) >= *cap_radius {
                Ok(MinimizerResult::closed(dist_sphere_in_ball(z, *r)?, w))
            } else {
                grid_refine(omega, z, set, budget)
            }
        }
        (SetKind::SphereShellMinusCap { .. }, ModelKind::Polydisk) => grid_refine(omega, z, set, budget),
        (SetKind::HyperplaneArrangement { planes }, ModelKind::Ball) => hyperplanes_min(omega, z, planes),
        (SetKind::HyperplaneArrangement { .. }, ModelKind::Polydisk) => grid_refine(omega, z, set, budget),
        (SetKind::VerticalHyperplanes { values }, ModelKind::Polydisk) => Ok(vertical_in_polydisk(z, values)),
        (SetKind::VerticalHyperplanes { values }, ModelKind::Ball) => {
            let planes = set.vertical_as_planes(values);
            hyperplanes_min(omega, z, &planes)
        }
        (SetKind::PointSet { points }, _) => Ok(points_enumerated(omega, z, points)),
    }
}

/// Purely numerical `d^S(z)`: grid seeding over the set's parameterization
/// and pattern-search refinement, ignoring every closed form. Finite sets
/// are enumerated.
pub fn grid_refine(omega: &ModelDomain, z: &CVector, set: &BoundarySet, budget: usize) -> Result<MinimizerResult> {
    check_point(omega, z)?;
    check_budget(budget)?;
    set.validate_in(omega)?;
    let n = omega.dim;
    let shell = |gauge: ModelKind, r: f64, cap: Option<(CVector, f64)>| {
        let chart = ShellChart { n, r, gauge, cap };
        let objective = |x: &[f64]| chart.point(x).map(|w| tanh_c_unchecked(omega, z, &w));
        let run = minimize(&chart, &objective, budget);
        let w = chart.point(&run.x).expect("accepted point");
        finish(omega, z, w, run)
    };
    let result = match &set.kind {
        SetKind::SphereShell { r } => shell(ModelKind::Ball, *r, None),
        SetKind::PolydiskShell { r } => shell(ModelKind::Polydisk, *r, None),
        SetKind::SphereShellMinusCap {
            r,
            cap_center,
            cap_radius,
        } => shell(ModelKind::Ball, *r, Some((cap_center.clone(), *cap_radius))),
        SetKind::HyperplaneArrangement { planes } => planes
            .iter()
            .map(|h| plane_numeric(omega, z, h, budget))
            .reduce(|a, b| if b.value < a.value { b } else { a })
            .ok_or(Error::EmptySet)?,
        SetKind::VerticalHyperplanes { values } => set
            .vertical_as_planes(values)
            .iter()
            .map(|h| plane_numeric(omega, z, h, budget))
            .reduce(|a, b| if b.value < a.value { b } else { a })
            .ok_or(Error::EmptySet)?,
        SetKind::PointSet { points } => points_enumerated(omega, z, points),
    };
    Ok(result)
}

/// Brute-force upper bound on `d^S(z)`: the minimum of `tanh c(z, w)` over
/// `samples` quasi-uniform points `w` of `S` (deterministic in `seed`).
/// Finite sets are enumerated exactly.
pub fn grid_min_oracle(omega: &ModelDomain, z: &CVector, set: &BoundarySet, samples: usize, seed: u64) -> Result<f64> {
    check_point(omega, z)?;
    set.validate_in(omega)?;
    if samples < MIN_BUDGET {
        bail_param!("oracle needs at least {MIN_BUDGET} samples");
    }
    let n = omega.dim;
    let eval = |w: &CVector| tanh_c_unchecked(omega, z, w);
    let mut best = f64::INFINITY;
    match &set.kind {
        SetKind::SphereShell { r } => {
            for w in sampling::sphere_points(n, *r, samples, seed) {
                best = best.min(eval(&w));
            }
        }
        SetKind::SphereShellMinusCap {
            r,
            cap_center,
            cap_radius,
        } => {
            for w in sampling::sphere_points(n, *r, samples, seed) {
                if w.distance(cap_center) >= *cap_radius {
                    best = best.min(eval(&w));
                }
            }
        }
        SetKind::PolydiskShell { r } => {
            let seq = QuasiSequence::new(sampling::polydisk_shell_dims(n), seed);
            let mut u = alloc::vec![0.0; seq.dim()];
            for k in 0..samples as u64 {
                seq.fill(k, &mut u);
                best = best.min(eval(&sampling::polydisk_shell_point(n, *r, &u)));
            }
        }
        SetKind::HyperplaneArrangement { planes } => {
            let per = samples.div_ceil(planes.len());
            for h in planes {
                best = best.min(oracle_plane(omega, h, per, seed, &eval));
            }
        }
        SetKind::VerticalHyperplanes { values } => {
            // w = (p, u) with u quasi-uniform in the slice of Omega.
            let per = samples.div_ceil(values.len());
            for &p in values {
                if n == 1 {
                    best = best.min(eval(&CVector::new(alloc::vec![p])?));
                    continue;
                }
                let seq = QuasiSequence::new(2 * (n - 1), seed);
                let mut u = alloc::vec![0.0; seq.dim()];
                for k in 0..per as u64 {
                    seq.fill(k, &mut u);
                    let rest = match omega.kind {
                        ModelKind::Polydisk => (0..n - 1)
                            .map(|j| sampling::disk_point(1.0, &u[2 * j..2 * j + 2]))
                            .collect::<Vec<_>>(),
                        ModelKind::Ball => sampling::ball_point(n - 1, (1.0 - p.norm_sqr()).sqrt(), &u).into_coords(),
                    };
                    let mut coords = alloc::vec![p];
                    coords.extend(rest);
                    let w = CVector::new(coords)?;
                    if omega.holds(&w) {
                        best = best.min(eval(&w));
                    }
                }
            }
        }
        SetKind::PointSet { points } => {
            for p in points {
                best = best.min(eval(p));
            }
        }
    }
    Ok(best)
}

fn oracle_plane(omega: &ModelDomain, h: &Hyperplane, samples: usize, seed: u64, eval: &dyn Fn(&CVector) -> f64) -> f64 {
    let n = omega.dim;
    if n == 1 {
        return eval(&h.foot());
    }
    let chart = PlaneChart::new(omega, h);
    let seq = QuasiSequence::new(sampling::ball_dims(n - 1), seed);
    let mut u = alloc::vec![0.0; seq.dim()];
    let mut best = f64::INFINITY;
    for k in 0..samples as u64 {
        seq.fill(k, &mut u);
        let x = sampling::ball_point(n - 1, chart.radius, &u).to_re_im();
        if let Some(w) = chart.point(&x) {
            best = best.min(eval(&w));
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Numerical engine

/// A parameterization of a set by points of `R^d`, with a seeding map from
/// the unit cube.
trait Chart {
    fn param_dim(&self) -> usize;
    fn seed_dim(&self) -> usize;
    fn seed(&self, u: &[f64]) -> Vec<f64>;
    /// Rescales parameters without changing the represented point.
    fn normalize(&self, _x: &mut [f64]) {}
    /// Initial refinement step given the number of seeds.
    fn step(&self, seeds: usize) -> f64;
}

/// Radial projection of `R^{2n} \ {0}` onto the sphere or polydisk shell of
/// radius `r`, minus an optional open Euclidean cap.
struct ShellChart {
    n: usize,
    r: f64,
    gauge: ModelKind,
    cap: Option<(CVector, f64)>,
}

impl ShellChart {
    fn point(&self, x: &[f64]) -> Option<CVector> {
        let v = CVector::from_re_im(x).ok()?;
        let g = match self.gauge {
            ModelKind::Ball => v.norm(),
            ModelKind::Polydisk => v.max_modulus(),
        };
        if !(g > 1e-200) {
            return None;
        }
        let w = v.scale_real(self.r / g);
        match &self.cap {
            Some((q, eps)) if w.distance(q) < *eps => None,
            _ => Some(w),
        }
    }
}

/// Seed spacing on a unit sphere of real dimension `d - 1` with `count` seeds.
fn sphere_spacing(real_dim: usize, count: usize) -> f64 {
    let d = real_dim as f64;
    // surface area of S^{d-1} ~ 2 pi^{d/2} / Gamma(d/2)
    let area = 2.0 * PI.powf(d / 2.0) / gamma_half(real_dim);
    (area / count as f64).powf(1.0 / (d - 1.0).max(1.0)).clamp(1e-3, 0.5)
}

/// `Gamma(k / 2)` for positive integer `k`.
fn gamma_half(k: usize) -> f64 {
    let mut g = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

fn unit_normalize(x: &mut [f64]) {
    let len = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    if len > 0.0 {
        x.iter_mut().for_each(|t| *t /= len);
    }
}

impl Chart for ShellChart {
    fn param_dim(&self) -> usize {
        2 * self.n
    }
    fn seed_dim(&self) -> usize {
        sampling::sphere_dims(self.n)
    }
    fn seed(&self, u: &[f64]) -> Vec<f64> {
        sampling::sphere_point(self.n, 1.0, u).to_re_im()
    }
    fn normalize(&self, x: &mut [f64]) {
        unit_normalize(x)
    }
    fn step(&self, seeds: usize) -> f64 {
        sphere_spacing(2 * self.n, seeds)
    }
}

/// Moduli `(|w_1|, ..., |w_n|)` of the sphere (`shell = Ball`) or of the
/// polydisk shell (`shell = Polydisk`) of radius `r`, parameterized by
/// `R^n \ {0}` through `x -> r |x| / gauge(|x|)`.
struct ModuliChart {
    n: usize,
    r: f64,
    shell: ModelKind,
}

impl ModuliChart {
    fn moduli(&self, x: &[f64]) -> Option<Vec<f64>> {
        let g = match self.shell {
            ModelKind::Ball => x.iter().map(|t| t * t).sum::<f64>().sqrt(),
            ModelKind::Polydisk => x.iter().map(|t| t.abs()).fold(0.0, f64::max),
        };
        if !(g > 1e-200) {
            return None;
        }
        Some(x.iter().map(|t| self.r * t.abs() / g).collect())
    }
}

impl Chart for ModuliChart {
    fn param_dim(&self) -> usize {
        self.n
    }
    fn seed_dim(&self) -> usize {
        sampling::sphere_dims(self.n)
    }
    fn seed(&self, u: &[f64]) -> Vec<f64> {
        sampling::sphere_point(self.n, 1.0, u)
            .coords()
            .iter()
            .map(|c| c.norm())
            .collect()
    }
    fn normalize(&self, x: &mut [f64]) {
        unit_normalize(x)
    }
    fn step(&self, seeds: usize) -> f64 {
        sphere_spacing(self.n, seeds)
    }
}

/// `H ∩ Omega` parameterized by tangent coordinates around the foot point.
struct PlaneChart {
    omega: ModelDomain,
    foot: CVector,
    basis: Vec<CVector>,
    radius: f64,
}

impl PlaneChart {
    fn new(omega: &ModelDomain, h: &Hyperplane) -> Self {
        let foot = h.foot();
        let radius = match omega.kind {
            ModelKind::Ball => (1.0 - foot.norm_sqr()).max(0.0).sqrt(),
            ModelKind::Polydisk => (omega.dim as f64).sqrt(),
        };
        Self {
            omega: *omega,
            basis: h.tangent_basis(),
            foot,
            radius,
        }
    }

    fn point(&self, x: &[f64]) -> Option<CVector> {
        let mut w = self.foot.clone();
        for (k, b) in self.basis.iter().enumerate() {
            w = w.add_scaled(Complex64::new(x[2 * k], x[2 * k + 1]), b);
        }
        self.omega.holds(&w).then_some(w)
    }
}

impl Chart for PlaneChart {
    fn param_dim(&self) -> usize {
        2 * self.basis.len()
    }
    fn seed_dim(&self) -> usize {
        sampling::ball_dims(self.basis.len())
    }
    fn seed(&self, u: &[f64]) -> Vec<f64> {
        sampling::ball_point(self.basis.len(), self.radius, u).to_re_im()
    }
    fn step(&self, seeds: usize) -> f64 {
        let d = self.param_dim() as f64;
        (self.radius * (1.0 / seeds as f64).powf(1.0 / d)).clamp(1e-4, 0.5)
    }
}

struct Run {
    x: Vec<f64>,
    evals: usize,
    converged: bool,
}

fn poll_directions(d: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut e = alloc::vec![0.0; d];
            e[i] = s;
            dirs.push(e);
        }
    }
    let h = core::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut e = alloc::vec![0.0; d];
                e[i] = si * h;
                e[j] = sj * h;
                dirs.push(e);
            }
        }
    }
    dirs
}

/// Grid seeding over `budget` quasi-random points followed by compass
/// search (coordinate and pairwise-diagonal directions, step halving) from
/// the best few seeds.
fn minimize(chart: &dyn Chart, objective: &dyn Fn(&[f64]) -> Option<f64>, budget: usize) -> Run {
    let seq = QuasiSequence::new(chart.seed_dim(), 0);
    let mut u = alloc::vec![0.0; seq.dim()];
    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::with_capacity(REFINE_SEEDS + 1);
    for k in 0..budget as u64 {
        seq.fill(k, &mut u);
        let x = chart.seed(&u);
        let Some(f) = objective(&x) else { continue };
        if seeds.len() < REFINE_SEEDS || f < seeds[seeds.len() - 1].0 {
            let pos = seeds.partition_point(|(g, _)| *g <= f);
            seeds.insert(pos, (f, x));
            seeds.truncate(REFINE_SEEDS);
        }
    }
    let mut evals = budget;
    let step0 = chart.step(budget);
    let dirs = poll_directions(chart.param_dim());
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for (f0, x0) in seeds {
        let (f, x, used, converged) = pattern_search(chart, objective, &dirs, x0, f0, step0);
        evals += used;
        if best.as_ref().is_none_or(|b| f < b.0) {
            best = Some((f, x, converged));
        }
    }
    let (_, x, converged) = best.expect("at least one seed is accepted by every chart");
    Run { x, evals, converged }
}

fn pattern_search(
    chart: &dyn Chart,
    objective: &dyn Fn(&[f64]) -> Option<f64>,
    dirs: &[Vec<f64>],
    mut x: Vec<f64>,
    mut fx: f64,
    step0: f64,
) -> (f64, Vec<f64>, usize, bool) {
    let mut step = step0;
    let floor = step0 * MIN_STEP_RATIO;
    let mut evals = 0;
    let mut trial = x.clone();
    while step >= floor {
        if evals >= REFINE_EVALS {
            return (fx, x, evals, false);
        }
        let mut moved = false;
        for d in dirs {
            for ((t, xi), di) in trial.iter_mut().zip(&x).zip(d) {
                *t = xi + step * di;
            }
            evals += 1;
            if let Some(f) = objective(&trial) {
                if f < fx {
                    fx = f;
                    x.copy_from_slice(&trial);
                    chart.normalize(&mut x);
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step *= SHRINK;
        }
    }
    (fx, x, evals, true)
}

fn finish(omega: &ModelDomain, z: &CVector, w: CVector, run: Run) -> MinimizerResult {
    MinimizerResult {
        value: tanh_c_unchecked(omega, z, &w),
        argmin: w,
        method: Method::GridRefine,
        samples: run.evals,
        converged: run.converged,
    }
}
