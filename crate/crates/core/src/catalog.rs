//! Squeezing functions and Fridman invariants with known closed forms or
//! two-sided bounds.
//!
//! Where an equality `s = ẽ` holds, both quantities come out of the same
//! evaluator. Where only bounds are known the result is an [`Interval`] and
//! never a point estimate.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::cvector::{CVector, ModelDomain, ModelKind};
use crate::error::{bail_param, Error, Result};
use crate::set_distance::{self, BoundarySet, MinimizerResult, SetKind};

/// Two-sided bounds `lo <= value <= hi` inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            bail_param!("interval [{lo}, {hi}] is not an ordered subinterval of [0, 1]");
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Value of a catalog invariant at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Invariant {
    Exact(f64),
    Bounds(Interval),
}

impl Invariant {
    pub fn exact(&self) -> Option<f64> {
        match self {
            Invariant::Exact(v) => Some(*v),
            Invariant::Bounds(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "camelCase"))]
pub enum SpecKind {
    /// `A^n_r = {r < ||z|| < 1}`, model `B^n`.
    AnnulusBall { r: f64 },
    /// `D^n \ closed D^n_r`, model `D^n`.
    PolydiskMinusPolydisk { r: f64 },
    /// `D^n \ closed B^n_r`, model `D^n`.
    PolydiskMinusBall { r: f64 },
    /// `B^n \ closed D^n_r`, model `B^n`, `r < 1/sqrt(n)`.
    BallMinusPolydisk { r: f64 },
    /// `D^n \ {0}`, model `B^n` (bounds only).
    PuncturedPolydisk,
    /// `D* x D^{n-1}`, model `B^n` (bounds only).
    PuncturedDiskTimesPolydisk,
    /// `B^n \ {0}`, model `B^n`.
    PuncturedBall,
    /// `B^n \ {0}`, model `D^n`.
    PuncturedBallPolydiskModel,
    /// `D \ {0}`.
    PuncturedDisk,
    /// `A_r = {r < |z| < 1}` in `C`.
    Annulus1d { r: f64 },
    /// `Omega \ S` for a model domain and a deleted set.
    OmegaMinusSet { omega: ModelDomain, set: BoundarySet },
}

impl SpecKind {
    /// Short identifier used in labels.
    pub fn name(&self) -> &'static str {
        match self {
            Self::AnnulusBall { .. } => "annulusBall",
            Self::PolydiskMinusPolydisk { .. } => "polydiskMinusPolydisk",
            Self::PolydiskMinusBall { .. } => "polydiskMinusBall",
            Self::BallMinusPolydisk { .. } => "ballMinusPolydisk",
            Self::PuncturedPolydisk => "puncturedPolydisk",
            Self::PuncturedDiskTimesPolydisk => "puncturedDiskTimesPolydisk",
            Self::PuncturedBall => "puncturedBall",
            Self::PuncturedBallPolydiskModel => "puncturedBallPolydiskModel",
            Self::PuncturedDisk => "puncturedDisk",
            Self::Annulus1d { .. } => "annulus1d",
            Self::OmegaMinusSet { .. } => "omegaMinusSet",
        }
    }
}

/// A concrete domain together with its ambient dimension.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DomainSpec {
    pub dim: usize,
    pub kind: SpecKind,
}

fn radius_in_unit(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        bail_param!("radius {r} not in (0, 1)");
    }
    Ok(())
}

fn outside(msg: &str) -> Error {
    Error::OutsideDomain(alloc::string::String::from(msg))
}

impl DomainSpec {
    pub fn new(dim: usize, kind: SpecKind) -> Result<Self> {
        let spec = Self { dim, kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            bail_param!("dimension must be positive");
        }
        let needs_n2 = |what: &str| -> Result<()> {
            if n < 2 {
                bail_param!("{what} requires n >= 2");
            }
            Ok(())
        };
        match &self.kind {
            SpecKind::AnnulusBall { r } => {
                needs_n2("annulus A^n_r")?;
                radius_in_unit(*r)
            }
            SpecKind::PolydiskMinusPolydisk { r } | SpecKind::PolydiskMinusBall { r } => {
                needs_n2("polydisk minus compact")?;
                radius_in_unit(*r)
            }
            SpecKind::BallMinusPolydisk { r } => {
                needs_n2("ball minus polydisk")?;
                radius_in_unit(*r)?;
                if *r >= 1.0 / (n as f64).sqrt() {
                    bail_param!("ball minus polydisk needs r < 1/sqrt(n), got {r}");
                }
                Ok(())
            }
            SpecKind::PuncturedPolydisk | SpecKind::PuncturedBall | SpecKind::PuncturedBallPolydiskModel => {
                needs_n2("punctured domain")
            }
            SpecKind::PuncturedDiskTimesPolydisk => Ok(()),
            SpecKind::PuncturedDisk => {
                if n != 1 {
                    bail_param!("punctured disc is one-dimensional");
                }
                Ok(())
            }
            SpecKind::Annulus1d { r } => {
                if n != 1 {
                    bail_param!("annulus A_r is one-dimensional");
                }
                radius_in_unit(*r)
            }
            SpecKind::OmegaMinusSet { omega, set } => {
                if omega.dim != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: omega.dim,
                    });
                }
                set.validate_in(omega)?;
                let finite = matches!(set.kind, SetKind::PointSet { .. });
                if n < 2 && !finite {
                    bail_param!("the set-distance identity needs n >= 2 unless S is finite");
                }
                Ok(())
            }
        }
    }

    /// Membership of `z` in the domain (open; deleted sets excluded).
    pub fn contains(&self, z: &CVector) -> bool {
        if z.dim() != self.dim {
            return false;
        }
        let norm = z.norm();
        let maxm = z.max_modulus();
        match &self.kind {
            SpecKind::AnnulusBall { r } => *r < norm && norm < 1.0,
            SpecKind::PolydiskMinusPolydisk { r } => *r < maxm && maxm < 1.0,
            SpecKind::PolydiskMinusBall { r } => *r < norm && maxm < 1.0,
            SpecKind::BallMinusPolydisk { r } => *r < maxm && norm < 1.0,
            SpecKind::PuncturedPolydisk => 0.0 < maxm && maxm < 1.0,
            SpecKind::PuncturedDiskTimesPolydisk => z[0].norm() > 0.0 && maxm < 1.0,
            SpecKind::PuncturedBall | SpecKind::PuncturedBallPolydiskModel => 0.0 < norm && norm < 1.0,
            SpecKind::PuncturedDisk => 0.0 < maxm && maxm < 1.0,
            SpecKind::Annulus1d { r } => *r < maxm && maxm < 1.0,
            SpecKind::OmegaMinusSet { omega, set } => {
                omega.holds(z) && !set.contains_point(z, set_distance::ON_SET_TOLERANCE)
            }
        }
    }

    /// The model domain `Omega` of the (generalized) squeezing function.
    pub fn model(&self) -> ModelDomain {
        match &self.kind {
            SpecKind::PolydiskMinusPolydisk { .. }
            | SpecKind::PolydiskMinusBall { .. }
            | SpecKind::PuncturedBallPolydiskModel => ModelDomain::polydisk(self.dim),
            SpecKind::OmegaMinusSet { omega, .. } => *omega,
            _ => ModelDomain::ball(self.dim),
        }
    }

    /// Whether the Fridman invariant is known to equal the squeezing function
    /// here (recorded from the hypotheses of the underlying results, not
    /// computed).
    pub fn fridman_equality(&self) -> bool {
        match &self.kind {
            SpecKind::PolydiskMinusPolydisk { .. } => false,
            SpecKind::PuncturedPolydisk | SpecKind::PuncturedDiskTimesPolydisk => false,
            SpecKind::OmegaMinusSet { omega, set } => fridman_equality(omega, set),
            _ => true,
        }
    }

    /// Evaluates the invariant at `z`; `budget` is only used by entries that
    /// need a numerical minimization.
    pub fn evaluate(&self, z: &CVector, budget: usize) -> Result<Invariant> {
        z.check_dim(self.dim)?;
        let exact = Invariant::Exact;
        match &self.kind {
            SpecKind::AnnulusBall { r } => squeeze_annulus_ball(z, *r).map(exact),
            SpecKind::PolydiskMinusPolydisk { r } => squeeze_polydisk_minus_polydisk(z, *r).map(exact),
            SpecKind::PolydiskMinusBall { r } => squeeze_polydisk_minus_ball(z, *r, budget).map(exact),
            SpecKind::BallMinusPolydisk { r } => squeeze_ball_minus_polydisk(z, *r, budget).map(exact),
            SpecKind::PuncturedPolydisk => squeeze_bounds_punctured_polydisk(z).map(Invariant::Bounds),
            SpecKind::PuncturedDiskTimesPolydisk => {
                squeeze_bounds_punctured_disk_times_polydisk(z).map(Invariant::Bounds)
            }
            SpecKind::PuncturedBall => squeeze_1d(OneDim::PuncturedBall, z).map(exact),
            SpecKind::PuncturedBallPolydiskModel => squeeze_punctured_ball_polydisk_model(z).map(exact),
            SpecKind::PuncturedDisk => squeeze_1d(OneDim::PuncturedDisk, z).map(exact),
            SpecKind::Annulus1d { r } => squeeze_1d(OneDim::Annulus { r: *r }, z).map(exact),
            SpecKind::OmegaMinusSet { omega, set } => {
                if !self.contains(z) {
                    return Err(outside("z not in Omega minus S"));
                }
                set_distance::dist_generic(omega, z, set, budget).map(|m| exact(m.value))
            }
        }
    }
}

fn fridman_equality(omega: &ModelDomain, set: &BoundarySet) -> bool {
    match (&set.kind, omega.kind) {
        // Levi-flat shell inside the polydisk: only the squeezing identity.
        (SetKind::PolydiskShell { .. }, ModelKind::Polydisk) => false,
        (SetKind::SphereShellMinusCap { .. }, ModelKind::Polydisk) => false,
        _ => true,
    }
}

fn check_n2(z: &CVector) -> Result<()> {
    if z.dim() < 2 {
        bail_param!("requires n >= 2");
    }
    Ok(())
}

/// `s = ẽ = (||z|| - r) / (1 - r||z||)` on the annulus `r < ||z|| < 1`.
pub fn squeeze_annulus_ball(z: &CVector, r: f64) -> Result<f64> {
    check_n2(z)?;
    radius_in_unit(r)?;
    let t = z.norm();
    if !(r < t && t < 1.0) {
        return Err(outside("z not in the annulus r < ||z|| < 1"));
    }
    Ok((t - r) / (1.0 - r * t))
}

/// `s^{D^n} = max_i (max{|z_i|, r} - r) / (1 - r|z_i|)` on
/// `D^n \ closed D^n_r`.
pub fn squeeze_polydisk_minus_polydisk(z: &CVector, r: f64) -> Result<f64> {
    check_n2(z)?;
    radius_in_unit(r)?;
    let m = z.max_modulus();
    if !(r < m && m < 1.0) {
        return Err(outside("z not in D^n minus the closed r-polydisk"));
    }
    Ok(z.coords()
        .iter()
        .map(|c| (c.norm().max(r) - r) / (1.0 - r * c.norm()))
        .fold(0.0, f64::max))
}

/// `s^{D^n} = ẽ^{D^n}` on `D^n \ closed B^n_r`, via the distance to the
/// sphere of radius `r` in the polydisk metric.
pub fn squeeze_polydisk_minus_ball(z: &CVector, r: f64, budget: usize) -> Result<f64> {
    check_n2(z)?;
    radius_in_unit(r)?;
    if !(z.norm() > r && z.max_modulus() < 1.0) {
        return Err(outside("z not in D^n minus the closed r-ball"));
    }
    set_distance::dist_sphere_in_polydisk(z, r, budget).map(|m| m.value)
}

/// `s = ẽ` on `B^n \ closed D^n_r` for `r < 1/sqrt(n)`, via the distance to
/// the polydisk shell in the ball metric.
pub fn squeeze_ball_minus_polydisk(z: &CVector, r: f64, budget: usize) -> Result<f64> {
    check_n2(z)?;
    radius_in_unit(r)?;
    if r >= 1.0 / (z.dim() as f64).sqrt() {
        bail_param!("ball minus polydisk needs r < 1/sqrt(n), got {r}");
    }
    if !(z.max_modulus() > r && z.norm() < 1.0) {
        return Err(outside("z not in B^n minus the closed r-polydisk"));
    }
    set_distance::dist_polydisk_shell_in_ball(z, r, budget).map(|m| m.value)
}

/// Bounds for `s_{D^n \ {0}}` (and `ẽ`):
/// `min{||z||/sqrt(n), 1/sqrt(n)} <= s <= ẽ <= min{max|z_i|, 1/sqrt(n)}`.
pub fn squeeze_bounds_punctured_polydisk(z: &CVector) -> Result<Interval> {
    check_n2(z)?;
    let m = z.max_modulus();
    if m == 0.0 {
        return Err(outside("z = 0 is deleted"));
    }
    if m >= 1.0 {
        return Err(outside("z not in the unit polydisk"));
    }
    let root_n = (z.dim() as f64).sqrt();
    let inv = 1.0 / root_n;
    let lo = (z.norm() / root_n).min(inv);
    let hi = m.min(inv);
    // lo <= hi holds analytically (||z|| <= sqrt(n) max|z_i|); equal moduli
    // make the two sides agree up to rounding.
    Interval::new(lo.min(hi), hi)
}

/// Bounds for `s_{D* x D^{n-1}}` (and `ẽ`):
/// `|z_1| / sqrt(1 + (n-1)|z_1|^2) <= s <= ẽ <= min{|z_1|, 1/sqrt(n)}`.
pub fn squeeze_bounds_punctured_disk_times_polydisk(z: &CVector) -> Result<Interval> {
    let a = z[0].norm();
    if a == 0.0 {
        return Err(outside("z_1 = 0 is deleted"));
    }
    if z.max_modulus() >= 1.0 {
        return Err(outside("z not in the unit polydisk"));
    }
    let n = z.dim() as f64;
    let lo = a / (1.0 + (n - 1.0) * a * a).sqrt();
    let hi = a.min(1.0 / n.sqrt());
    Interval::new(lo.min(hi), hi)
}

/// `s^{D^n}_{B^n \ {0}} = ẽ^{D^n} = min{||z||, 1/sqrt(n)}`.
pub fn squeeze_punctured_ball_polydisk_model(z: &CVector) -> Result<f64> {
    check_n2(z)?;
    let t = z.norm();
    if t == 0.0 {
        return Err(outside("z = 0 is deleted"));
    }
    if t >= 1.0 {
        return Err(outside("z not in the unit ball"));
    }
    Ok(t.min(1.0 / (z.dim() as f64).sqrt()))
}

/// One-dimensional and radially symmetric entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneDim {
    /// `s_{D \ {0}}(z) = |z|`.
    PuncturedDisk,
    /// `s_{A_r}(z) = max{|z|, r/|z|}`.
    Annulus { r: f64 },
    /// `s_{B^n \ {0}}(z) = ||z||`.
    PuncturedBall,
}

pub fn squeeze_1d(kind: OneDim, z: &CVector) -> Result<f64> {
    match kind {
        OneDim::PuncturedDisk | OneDim::Annulus { .. } if z.dim() != 1 => {
            bail_param!("one-dimensional domain needs a point of C")
        }
        _ => {}
    }
    let t = z.norm();
    match kind {
        OneDim::PuncturedDisk | OneDim::PuncturedBall => {
            if !(0.0 < t && t < 1.0) {
                return Err(outside("z not in the punctured disc/ball"));
            }
            Ok(t)
        }
        OneDim::Annulus { r } => {
            radius_in_unit(r)?;
            if !(r < t && t < 1.0) {
                return Err(outside("z not in the annulus r < |z| < 1"));
            }
            Ok(t.max(r / t))
        }
    }
}

/// `s^Omega_{Omega \ S}(z) = d^S(z)` together with whether `ẽ` is known to
/// coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSqueeze {
    pub result: MinimizerResult,
    pub fridman_equality: bool,
}

pub fn squeeze_omega_minus_set(
    omega: &ModelDomain,
    set: &BoundarySet,
    z: &CVector,
    budget: usize,
) -> Result<OmegaSqueeze> {
    let spec = DomainSpec::new(
        omega.dim,
        SpecKind::OmegaMinusSet {
            omega: *omega,
            set: set.clone(),
        },
    )?;
    if !spec.contains(z) {
        return Err(outside("z not in Omega minus S"));
    }
    let result = set_distance::dist_generic(omega, z, set, budget)?;
    Ok(OmegaSqueeze {
        result,
        fridman_equality: spec.fridman_equality(),
    })
}
