//! Domains whose squeezing function is not plurisubharmonic.
//!
//! Every construction removes finitely many pieces (points or complex
//! hyperplanes) through `p_i = (R/r) z_i`, where the `z_i` cover the sphere
//! (or circle) of radius `r` by balls of radius `delta`. The value at the
//! origin is then `R`, while every point of the sphere sees some `p_i`
//! closer than `R`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::caratheodory::tanh_c_unchecked;
use crate::catalog::{DomainSpec, SpecKind};
use crate::cvector::{CVector, ModelDomain};
use crate::error::{bail_param, Error, Result};
use crate::psh::SqueezeField;
use crate::sampling::{self, QuasiSequence};
use crate::set_distance::{self, BoundarySet, Hyperplane, SetKind};

/// Safety margin below `R` used by [`feasible_delta`].
pub const FEASIBILITY_MARGIN: f64 = 1e-4;
/// Probe count used by [`build_ball_config`] when choosing `delta`.
pub const DEFAULT_PROBE: usize = 4_096;
/// Default candidate count for [`build_ball_config`].
pub const DEFAULT_COVER_BUDGET: usize = 50_000;
/// Default sample count for [`verify_config`].
pub const DEFAULT_VERIFY_SAMPLES: usize = 10_000;
/// Largest dimension accepted by [`build_ball_config`].
pub const MAX_BALL_DIM: usize = 3;
/// Tolerance on `s_D(0) = R`.
pub const CENTER_TOLERANCE: f64 = 1e-9;

/// Net spacing used by the greedy sphere covering, relative to `delta`.
const NET_SPACING: f64 = 0.75;
/// Largest gap a built covering may show on its own probe, relative to `delta`.
const COVER_SAFETY: f64 = 0.9;
const COVER_SEED: u64 = 0x5eed_c0de;
const PROBE_SEED: u64 = 0x0b5e_55ed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub enum ConfigKind {
    /// `B^n` minus the hyperplanes through `p_i` orthogonal to `z_i - p_i`.
    BallHyperplanes,
    /// The unit disc minus the points `p_i`.
    DiskPoints,
    /// `D^n` minus the hyperplanes `{w_1 = p_{i1}}`.
    PolydiskVerticalPlanes,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct Config {
    pub kind: ConfigKind,
    pub r: f64,
    #[cfg_attr(feature = "serde", serde(rename = "R"))]
    pub big_r: f64,
    pub m: usize,
    pub delta: f64,
    /// The covering centers `z_i`.
    pub sample_points: Vec<CVector>,
    /// `p_i = (R/r) z_i`.
    pub pushed_points: Vec<CVector>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub planes: Option<SetKind>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct VerificationReport {
    #[cfg_attr(feature = "serde", serde(rename = "coveringOK"))]
    pub covering_ok: bool,
    /// Largest distance from a sampled sphere point to its nearest `z_i`.
    pub worst_gap: f64,
    #[cfg_attr(feature = "serde", serde(rename = "feasibilityOK"))]
    pub feasibility_ok: bool,
    /// Largest sampled `tanh c(p_i, w)` over `w` in `B(z_i, delta)`.
    pub worst_feasibility: f64,
    /// `s_D(0)`, the distance from the origin to the deleted set.
    pub center_value: f64,
    #[cfg_attr(feature = "serde", serde(rename = "centerOK"))]
    pub center_ok: bool,
    /// Largest sampled `s_D(w)` over `w` on the sphere of radius `r`.
    pub boundary_max: f64,
    #[cfg_attr(feature = "serde", serde(rename = "boundaryOK"))]
    pub boundary_ok: bool,
    pub samples: usize,
    pub seed: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.covering_ok && self.feasibility_ok && self.center_ok && self.boundary_ok
    }
}

fn check_radii(r: f64, big_r: f64) -> Result<()> {
    if !(0.0 < r && r < big_r && big_r < 1.0) {
        bail_param!("need 0 < r < R < 1, got r = {r}, R = {big_r}");
    }
    Ok(())
}

/// `sup tanh c(p, w)` over `||w - z|| = delta` for `z = r e_1`, `p = R e_1`.
///
/// The value depends only on `w_1` and `|w'|` (with `w = (w_1, w')`), and
/// grows with `|w'|`, so the sphere reduces to `w_1 = r + rho e^{i theta}`,
/// `|w'| = sqrt(delta^2 - rho^2)`, with `rho = delta` forced when `n = 1`.
/// `probe` quasi-random `(rho, theta)` seeds, then a compass search from the
/// best one.
fn sup_on_sphere(r: f64, big_r: f64, n: usize, delta: f64, probe: usize) -> f64 {
    let p = CVector::from_real(&[big_r, 0.0]).expect("finite");
    let ball = ModelDomain::ball(2);
    let value = |rho: f64, theta: f64| {
        let rho = if n == 1 { delta } else { rho.clamp(0.0, delta) };
        let w1 = Complex64::new(r, 0.0) + Complex64::from_polar(rho, theta);
        let w2 = Complex64::new((delta * delta - rho * rho).max(0.0).sqrt(), 0.0);
        let w = CVector::new(alloc::vec![w1, w2]).expect("finite");
        if ball.holds(&w) {
            tanh_c_unchecked(&ball, &p, &w)
        } else {
            1.0
        }
    };
    let seq = QuasiSequence::new(2, COVER_SEED);
    let mut u = [0.0; 2];
    let (mut best, mut x) = (f64::NEG_INFINITY, (delta, 0.0));
    for k in 0..probe as u64 {
        seq.fill(k, &mut u);
        let (rho, theta) = (delta * u[0].sqrt(), 2.0 * PI * u[1]);
        let v = value(rho, theta);
        if v > best {
            best = v;
            x = (rho, theta);
        }
    }
    let mut step = 0.25;
    while step > 1e-12 {
        let moves = [
            (step * delta, 0.0),
            (-step * delta, 0.0),
            (0.0, step * PI),
            (0.0, -step * PI),
        ];
        let improved = moves.iter().find_map(|&(dr, dt)| {
            let cand = ((x.0 + dr).clamp(0.0, delta), x.1 + dt);
            let v = value(cand.0, cand.1);
            (v > best).then_some((v, cand))
        });
        match improved {
            Some((v, cand)) => {
                best = v;
                x = cand;
            }
            None => step *= 0.5,
        }
    }
    best
}

/// Bisects for the largest `delta` with `r + delta < 1` and
/// `tanh c(p, w) < R - margin` on `B(z, delta)`, where `z = (r, 0, ..., 0)`
/// and `p = (R/r) z`; every other center is a unitary image of this one. The
/// supremum is taken on the boundary sphere since `tanh c(p, .)` is the norm
/// of a holomorphic map. The margin is [`FEASIBILITY_MARGIN`], shrunk to half
/// of `R - tanh c(p, z)` when that gap is smaller.
pub fn feasible_delta(r: f64, big_r: f64, n: usize, probe: usize) -> Result<f64> {
    check_radii(r, big_r)?;
    if n == 0 {
        bail_param!("dimension must be positive");
    }
    if probe == 0 {
        bail_param!("probe count must be positive");
    }
    let at_center = (big_r - r) / (1.0 - r * big_r);
    let margin = FEASIBILITY_MARGIN.min(0.5 * (big_r - at_center));
    let threshold = big_r - margin;
    let (mut lo, mut hi) = (0.0, 1.0 - r);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if sup_on_sphere(r, big_r, n, mid, probe) < threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `delta = r sqrt(2 - 2 cos(2 pi / m))`, the chord between consecutive
/// `m`-th roots scaled by `r`.
pub fn chord(r: f64, m: usize) -> f64 {
    r * (2.0 - 2.0 * (2.0 * PI / m as f64).cos()).sqrt()
}

fn equispaced(n: usize, radius: f64, m: usize) -> Result<Vec<CVector>> {
    (0..m)
        .map(|j| {
            let mut coords = alloc::vec![Complex64::new(0.0, 0.0); n];
            coords[0] = Complex64::from_polar(radius, 2.0 * PI * j as f64 / m as f64);
            CVector::new(coords)
        })
        .collect()
}

/// Smallest `m >= 2` with `delta(m) < (r - r R^2)/(1 + R^2)` and
/// `r + delta(m) < 1`.
pub fn smallest_disk_m(r: f64, big_r: f64) -> Result<usize> {
    check_radii(r, big_r)?;
    let bound = (r - r * big_r * big_r) / (1.0 + big_r * big_r);
    (2..)
        .find(|&m| {
            let d = chord(r, m);
            d < bound && r + d < 1.0
        })
        .ok_or_else(|| Error::InvalidParameter(alloc::string::String::from("no admissible m")))
}

/// The disc minus `m` equispaced points of modulus `R`, with the covering
/// centers at modulus `r`.
pub fn example_disk_config(r: f64, big_r: f64) -> Result<Config> {
    let m = smallest_disk_m(r, big_r)?;
    Ok(Config {
        kind: ConfigKind::DiskPoints,
        r,
        big_r,
        m,
        delta: chord(r, m),
        sample_points: equispaced(1, r, m)?,
        pushed_points: equispaced(1, big_r, m)?,
        planes: None,
    })
}

/// The disc construction lifted to the first coordinate of `D^n`, deleting
/// the hyperplanes `{w_1 = p_{i1}}`.
pub fn build_polydisk_config(r: f64, big_r: f64, n: usize) -> Result<Config> {
    if n < 2 {
        bail_param!("the polydisk construction needs n >= 2");
    }
    let disk = example_disk_config(r, big_r)?;
    let pushed = equispaced(n, big_r, disk.m)?;
    let values = pushed.iter().map(|p| p[0]).collect();
    Ok(Config {
        kind: ConfigKind::PolydiskVerticalPlanes,
        sample_points: equispaced(n, r, disk.m)?,
        pushed_points: pushed,
        planes: Some(SetKind::VerticalHyperplanes { values }),
        ..disk
    })
}

fn hyperplane_through(z: &CVector, p: &CVector) -> Result<Hyperplane> {
    Hyperplane::new(p.clone(), z - p)
}

fn nearest_gap(w: &CVector, centers: &[CVector]) -> f64 {
    centers.iter().map(|c| c.distance(w)).fold(f64::INFINITY, f64::min)
}

/// Largest nearest-center distance over `samples` quasi-uniform points of
/// the sphere `||w|| = r` in `C^n`.
fn sphere_gap(n: usize, r: f64, centers: &[CVector], samples: usize, seed: u64) -> f64 {
    sampling::sphere_points(n, r, samples, seed)
        .map(|w| nearest_gap(&w, centers))
        .fold(0.0, f64::max)
}

/// `B^n` minus hyperplanes `H_i = {<w - p_i, z_i - p_i> = 0}`. The centers
/// `z_i` are a greedy net (spacing `0.75 delta`) extracted from `budget`
/// quasi-uniform points of the sphere of radius `r`; the covering is then
/// checked on an independent probe of the same size.
pub fn build_ball_config(r: f64, big_r: f64, n: usize, budget: usize) -> Result<Config> {
    check_radii(r, big_r)?;
    if n < 2 {
        bail_param!("the ball construction needs n >= 2 (use the disc construction for n = 1)");
    }
    if n > MAX_BALL_DIM {
        return Err(Error::Unsupported(alloc::format!(
            "sphere coverings above n = {MAX_BALL_DIM} are too large"
        )));
    }
    if budget < set_distance::MIN_BUDGET {
        bail_param!("budget {budget} below the minimum {}", set_distance::MIN_BUDGET);
    }
    let delta = feasible_delta(r, big_r, n, DEFAULT_PROBE)?;
    let spacing = NET_SPACING * delta;
    let mut centers: Vec<CVector> = Vec::new();
    for w in sampling::sphere_points(n, r, budget, COVER_SEED) {
        if nearest_gap(&w, &centers) >= spacing {
            centers.push(w);
        }
    }
    let gap = sphere_gap(n, r, &centers, budget, PROBE_SEED);
    if gap >= COVER_SAFETY * delta {
        return Err(Error::CoveringFailed {
            gap,
            points: centers.len(),
        });
    }
    let scale = big_r / r;
    let pushed: Vec<CVector> = centers.iter().map(|z| z.scale_real(scale)).collect();
    let planes = centers
        .iter()
        .zip(&pushed)
        .map(|(z, p)| hyperplane_through(z, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Config {
        kind: ConfigKind::BallHyperplanes,
        r,
        big_r,
        m: centers.len(),
        delta,
        sample_points: centers,
        pushed_points: pushed,
        planes: Some(SetKind::HyperplaneArrangement { planes }),
    })
}

impl Config {
    pub fn dim(&self) -> usize {
        self.sample_points.first().map_or(0, CVector::dim)
    }

    /// The model domain `Omega`.
    pub fn omega(&self) -> ModelDomain {
        match self.kind {
            ConfigKind::BallHyperplanes => ModelDomain::ball(self.dim()),
            ConfigKind::DiskPoints | ConfigKind::PolydiskVerticalPlanes => ModelDomain::polydisk(self.dim()),
        }
    }

    /// Structural checks: radii, counts, dimensions, `r + delta < 1` and
    /// `||z_i|| = r` (or `|z_{i1}| = r`). The relation `p_i = (R/r) z_i` is
    /// not enforced here, so perturbed configurations can still be verified.
    pub fn validate(&self) -> Result<()> {
        check_radii(self.r, self.big_r)?;
        if !(self.delta > 0.0) || self.r + self.delta >= 1.0 {
            bail_param!("delta = {} must be positive with r + delta < 1", self.delta);
        }
        if self.m == 0 || self.sample_points.len() != self.m || self.pushed_points.len() != self.m {
            bail_param!(
                "m = {} but {} sample and {} pushed points",
                self.m,
                self.sample_points.len(),
                self.pushed_points.len()
            );
        }
        let n = self.dim();
        match self.kind {
            ConfigKind::DiskPoints if n != 1 => bail_param!("disc configuration must be one-dimensional"),
            ConfigKind::BallHyperplanes | ConfigKind::PolydiskVerticalPlanes if n < 2 => {
                bail_param!("configuration needs n >= 2")
            }
            _ => {}
        }
        for (z, p) in self.sample_points.iter().zip(&self.pushed_points) {
            z.check_dim(n)?;
            p.check_dim(n)?;
            let modulus = match self.kind {
                ConfigKind::PolydiskVerticalPlanes => z[0].norm(),
                _ => z.norm(),
            };
            if (modulus - self.r).abs() > 1e-12 {
                bail_param!("sample point of modulus {modulus}, expected r = {}", self.r);
            }
        }
        self.deleted_set()?.validate_in(&self.omega())
    }

    /// The deleted set: the stored planes when present, otherwise the one
    /// implied by the pushed points.
    pub fn deleted_set(&self) -> Result<BoundarySet> {
        let n = self.dim();
        if let Some(kind) = &self.planes {
            let set = BoundarySet {
                dim: n,
                kind: kind.clone(),
            };
            set.validate()?;
            return Ok(set);
        }
        match self.kind {
            ConfigKind::DiskPoints => BoundarySet::points(self.pushed_points.clone()),
            ConfigKind::PolydiskVerticalPlanes => {
                BoundarySet::vertical_hyperplanes(n, self.pushed_points.iter().map(|p| p[0]).collect())
            }
            ConfigKind::BallHyperplanes => BoundarySet::hyperplanes(
                self.sample_points
                    .iter()
                    .zip(&self.pushed_points)
                    .map(|(z, p)| hyperplane_through(z, p))
                    .collect::<Result<_>>()?,
            ),
        }
    }

    /// The same centers with the deleted pieces moved to modulus `modulus`
    /// (`p_i = (modulus / r) z_i` on the relevant coordinate); `R` is kept.
    pub fn with_pushed_modulus(&self, modulus: f64) -> Result<Config> {
        if !(modulus > 0.0 && modulus < 1.0) {
            bail_param!("modulus {modulus} not in (0, 1)");
        }
        let scale = modulus / self.r;
        let pushed: Vec<CVector> = match self.kind {
            ConfigKind::PolydiskVerticalPlanes => self
                .sample_points
                .iter()
                .map(|z| {
                    let mut c = z.coords().to_vec();
                    c[0] *= scale;
                    CVector::new(c)
                })
                .collect::<Result<_>>()?,
            _ => self.sample_points.iter().map(|z| z.scale_real(scale)).collect(),
        };
        let mut out = Config {
            pushed_points: pushed,
            planes: None,
            ..self.clone()
        };
        out.planes = match self.kind {
            ConfigKind::DiskPoints => None,
            _ => Some(out.deleted_set()?.kind),
        };
        Ok(out)
    }

    /// `Omega` minus the deleted set, as a catalog entry.
    pub fn domain(&self) -> Result<DomainSpec> {
        DomainSpec::new(
            self.dim(),
            SpecKind::OmegaMinusSet {
                omega: self.omega(),
                set: self.deleted_set()?,
            },
        )
    }

    /// The squeezing function of the constructed domain as a field.
    pub fn field(&self, budget: usize) -> Result<SqueezeField> {
        SqueezeField::new(self.domain()?, budget)
    }

    /// Points of the sphere `||w|| = r` (disc and ball) or of the circle
    /// `{(r e^{i theta}, 0, ..., 0)}` (polydisk), quasi-uniform.
    fn boundary_samples(&self, samples: usize, seed: u64) -> Vec<CVector> {
        let n = self.dim();
        match self.kind {
            ConfigKind::PolydiskVerticalPlanes => sampling::sphere_points(1, self.r, samples, seed)
                .map(|w| {
                    let mut c = alloc::vec![Complex64::new(0.0, 0.0); n];
                    c[0] = w[0];
                    CVector::new(c).expect("finite sample")
                })
                .collect(),
            _ => sampling::sphere_points(n, self.r, samples, seed).collect(),
        }
    }
}

/// Checks a configuration on `samples` points:
/// covering of the sphere (or slice circle) of radius `r` by the balls
/// `B(z_i, delta)`; `tanh c(p_i, w) < R` on sampled `w` in each `B(z_i, delta)`
/// (half on its boundary sphere, half inside); `s_D(0) = R` within
/// [`CENTER_TOLERANCE`]; and `s_D(w) < R` on the sampled sphere.
pub fn verify_config(cfg: &Config, samples: usize, seed: u64) -> Result<VerificationReport> {
    cfg.validate()?;
    if samples == 0 {
        bail_param!("sample count must be positive");
    }
    let n = cfg.dim();
    let omega = cfg.omega();
    let set = cfg.deleted_set()?;
    let budget = set_distance::DEFAULT_BUDGET;

    let boundary = cfg.boundary_samples(samples, seed);
    let worst_gap = boundary
        .iter()
        .map(|w| nearest_gap(w, &cfg.sample_points))
        .fold(0.0, f64::max);

    let per_center = (samples / cfg.m).max(64);
    let seq = QuasiSequence::new(sampling::ball_dims(n), seed.wrapping_add(1));
    let mut u = alloc::vec![0.0; seq.dim()];
    let mut worst_feasibility: f64 = 0.0;
    for (z, p) in cfg.sample_points.iter().zip(&cfg.pushed_points) {
        for k in 0..per_center as u64 {
            seq.fill(k, &mut u);
            let offset = if k % 2 == 0 {
                sampling::sphere_point(n, cfg.delta, &u[..sampling::sphere_dims(n)])
            } else {
                sampling::ball_point(n, cfg.delta, &u)
            };
            let w = z + &offset;
            if omega.holds(&w) && omega.holds(p) {
                worst_feasibility = worst_feasibility.max(tanh_c_unchecked(&omega, p, &w));
            } else if !omega.holds(p) {
                worst_feasibility = 1.0;
            }
        }
    }

    let center_value = set_distance::dist_generic(&omega, &CVector::zeros(n), &set, budget)?.value;
    let mut boundary_max: f64 = 0.0;
    for w in &boundary {
        boundary_max = boundary_max.max(set_distance::dist_generic(&omega, w, &set, budget)?.value);
    }

    Ok(VerificationReport {
        covering_ok: worst_gap < cfg.delta,
        worst_gap,
        feasibility_ok: worst_feasibility < cfg.big_r,
        worst_feasibility,
        center_value,
        center_ok: (center_value - cfg.big_r).abs() <= CENTER_TOLERANCE,
        boundary_max,
        boundary_ok: boundary_max < cfg.big_r,
        samples,
        seed,
    })
}
