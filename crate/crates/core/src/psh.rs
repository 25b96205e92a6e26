//! Sub-mean-value testing on complex discs.
//!
//! A function is plurisubharmonic only if on every complex disc
//! `{c + t d : |t| <= rho}` inside its domain the value at the center is at
//! most the mean over the boundary circle. A single disc with a positive
//! deficit disproves plurisubharmonicity; this module searches for such
//! discs and reproduces the known non-plurisubharmonic examples.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::catalog::{DomainSpec, SpecKind};
use crate::cvector::{CVector, ModelDomain};
use crate::error::{bail_param, Error, Result};
use crate::sampling;
use crate::set_distance::{self, BoundarySet};

/// Default number of equispaced quadrature nodes on a circle.
pub const DEFAULT_QUAD_N: usize = 512;
/// Default deficit above which a disc counts as a violation.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Default number of random directions per center.
pub const DEFAULT_DIRECTIONS: usize = 16;

/// A real function on a domain of `C^n`.
pub trait Field: Sync {
    fn value(&self, z: &CVector) -> Result<f64>;
    fn contains(&self, z: &CVector) -> bool;
    fn label(&self) -> &str;
}

/// A [`Field`] built from closures.
pub struct FnField<F, G> {
    label: String,
    eval: F,
    domain: G,
}

impl<F, G> FnField<F, G>
where
    F: Fn(&CVector) -> f64 + Sync,
    G: Fn(&CVector) -> bool + Sync,
{
    pub fn new(label: &str, eval: F, domain: G) -> Self {
        Self {
            label: String::from(label),
            eval,
            domain,
        }
    }
}

impl<F, G> Field for FnField<F, G>
where
    F: Fn(&CVector) -> f64 + Sync,
    G: Fn(&CVector) -> bool + Sync,
{
    fn value(&self, z: &CVector) -> Result<f64> {
        Ok((self.eval)(z))
    }
    fn contains(&self, z: &CVector) -> bool {
        (self.domain)(z)
    }
    fn label(&self) -> &str {
        &self.label
    }
}

/// The exact catalog invariant of a [`DomainSpec`] as a field.
pub struct SqueezeField {
    pub spec: DomainSpec,
    pub budget: usize,
    label: String,
}

impl SqueezeField {
    pub fn new(spec: DomainSpec, budget: usize) -> Result<Self> {
        spec.validate()?;
        let label = match &spec.kind {
            SpecKind::OmegaMinusSet { omega, set } => {
                alloc::format!("squeeze[{:?}{} minus {}]", omega.kind, spec.dim, set.kind.name())
            }
            kind => alloc::format!("squeeze[{}, n = {}]", kind.name(), spec.dim),
        };
        Ok(Self { spec, budget, label })
    }
}

impl Field for SqueezeField {
    fn value(&self, z: &CVector) -> Result<f64> {
        self.spec
            .evaluate(z, self.budget)?
            .exact()
            .ok_or_else(|| Error::Unsupported(String::from("only bounds are known for this domain")))
    }
    fn contains(&self, z: &CVector) -> bool {
        self.spec.contains(z)
    }
    fn label(&self) -> &str {
        &self.label
    }
}

/// `max_i |z_i|` on the unit polydisk.
pub fn max_modulus_field(n: usize) -> impl Field {
    let d = ModelDomain::polydisk(n);
    FnField::new("max|z_i|", |z: &CVector| z.max_modulus(), move |z: &CVector| d.holds(z))
}

/// `||z||` on the unit ball.
pub fn euclidean_norm_field(n: usize) -> impl Field {
    let d = ModelDomain::ball(n);
    FnField::new("||z||", |z: &CVector| z.norm(), move |z: &CVector| d.holds(z))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct Violation {
    pub center: CVector,
    pub direction: CVector,
    pub radius: f64,
    pub center_value: f64,
    pub circle_mean: f64,
    /// `center_value - circle_mean`.
    pub deficit: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct PshReport {
    pub label: String,
    pub violations: Vec<Violation>,
    /// Discs tested.
    pub scanned: usize,
    /// Discs skipped because they left the domain.
    pub skipped: usize,
    pub quadrature_n: usize,
    pub tolerance: f64,
}

fn check_disc_args(direction: &CVector, center: &CVector, radius: f64, quad_n: usize) -> Result<()> {
    direction.check_dim(center.dim())?;
    if (direction.norm() - 1.0).abs() > 1e-9 {
        bail_param!("direction must be a unit vector (norm {})", direction.norm());
    }
    if !(radius > 0.0) {
        bail_param!("radius must be positive");
    }
    if quad_n < 16 || !quad_n.is_multiple_of(2) {
        bail_param!("quadrature size {quad_n} must be even and at least 16");
    }
    Ok(())
}

fn circle_point(center: &CVector, direction: &CVector, radius: f64, theta: f64) -> CVector {
    center.add_scaled(Complex64::from_polar(radius, theta), direction)
}

/// Checks the closed disc on concentric rings (the boundary circle at full
/// resolution, inner rings at a quarter of it).
fn disc_inside(f: &dyn Field, center: &CVector, direction: &CVector, radius: f64, quad_n: usize) -> Result<()> {
    if !f.contains(center) {
        return Err(Error::DiscOutsideDomain { theta: f64::NAN });
    }
    for ring in 1..=4 {
        let rho = radius * ring as f64 / 4.0;
        let nodes = if ring == 4 { quad_n } else { quad_n / 4 };
        for k in 0..nodes {
            let theta = 2.0 * PI * k as f64 / nodes as f64;
            if !f.contains(&circle_point(center, direction, rho, theta)) {
                return Err(Error::DiscOutsideDomain { theta });
            }
        }
    }
    Ok(())
}

/// Trapezoidal mean of `f(center + radius e^{i theta} direction)` over
/// `quad_n` equispaced angles; exact for trigonometric polynomials of degree
/// below `quad_n / 2`.
pub fn circle_mean(f: &dyn Field, center: &CVector, direction: &CVector, radius: f64, quad_n: usize) -> Result<f64> {
    check_disc_args(direction, center, radius, quad_n)?;
    disc_inside(f, center, direction, radius, quad_n)?;
    let mut sum = 0.0;
    for k in 0..quad_n {
        let theta = 2.0 * PI * k as f64 / quad_n as f64;
        sum += f.value(&circle_point(center, direction, radius, theta))?;
    }
    Ok(sum / quad_n as f64)
}

/// Returns the violation record when `f(center) - mean > tol`.
pub fn submean_check(
    f: &dyn Field,
    center: &CVector,
    direction: &CVector,
    radius: f64,
    quad_n: usize,
    tol: f64,
) -> Result<Option<Violation>> {
    let mean = circle_mean(f, center, direction, radius, quad_n)?;
    let center_value = f.value(center)?;
    let deficit = center_value - mean;
    Ok((deficit > tol).then(|| Violation {
        center: center.clone(),
        direction: direction.clone(),
        radius,
        center_value,
        circle_mean: mean,
        deficit,
    }))
}

/// Tests every `(center, direction, radius)` combination. Directions are
/// `directions` pseudo-random unit vectors per center drawn from `seed`;
/// discs leaving the domain are skipped and counted. Violations are listed
/// in `(center, direction, radius)` order.
pub fn scan_psh(
    f: &dyn Field,
    centers: &[CVector],
    directions: usize,
    radii: &[f64],
    quad_n: usize,
    tol: f64,
    seed: u64,
) -> Result<PshReport> {
    let mut rng = sampling::rng_from_seed(seed);
    let dirs: Vec<Vec<CVector>> = centers
        .iter()
        .map(|c| {
            (0..directions)
                .map(|_| sampling::random_unit(c.dim(), &mut rng))
                .collect()
        })
        .collect();
    scan_discs(f, centers, &dirs, radii, quad_n, tol)
}

/// As [`scan_psh`] with explicit directions per center.
pub fn scan_discs(
    f: &dyn Field,
    centers: &[CVector],
    directions: &[Vec<CVector>],
    radii: &[f64],
    quad_n: usize,
    tol: f64,
) -> Result<PshReport> {
    let mut report = PshReport {
        label: String::from(f.label()),
        violations: Vec::new(),
        scanned: 0,
        skipped: 0,
        quadrature_n: quad_n,
        tolerance: tol,
    };
    for (center, dirs) in centers.iter().zip(directions) {
        for dir in dirs {
            for &radius in radii {
                match submean_check(f, center, dir, radius, quad_n, tol) {
                    Ok(found) => {
                        report.scanned += 1;
                        report.violations.extend(found);
                    }
                    Err(Error::DiscOutsideDomain { .. }) => report.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of [`verify_capped_sphere`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct SliceCertificate {
    /// Slice points `(t e^{i phi}, 0, ..., 0)` checked.
    pub slice_points: usize,
    /// Largest `|field - (r - ||z||)/(1 - r||z||)|` over the slice points.
    pub max_formula_error: f64,
    /// Largest `|numerical set distance - formula|` over the slice points.
    pub max_numeric_error: f64,
    pub report: PshReport,
}

/// Slice-identity tolerance between the formula and the numerical distance.
pub const SLICE_TOLERANCE: f64 = 2e-3;

/// `D = B^n \ A` with `A` the sphere of radius `r` minus the cap of radius
/// `eps` around `(0, ..., 0, r)`; the squeezing function is the set distance
/// to `A`. Returns its field.
pub fn capped_sphere_field(r: f64, eps: f64, n: usize, budget: usize) -> Result<SqueezeField> {
    if n < 2 {
        bail_param!("needs n >= 2");
    }
    if !(r > 0.0 && r < 1.0) {
        bail_param!("r must lie in (0, 1)");
    }
    if !(eps > 0.0) || r + eps > 1.0 {
        bail_param!("the cap B(Q, {eps}) must lie in the unit ball");
    }
    let set = BoundarySet::shell_minus_north_cap(n, r, eps)?;
    let spec = DomainSpec::new(
        n,
        SpecKind::OmegaMinusSet {
            omega: ModelDomain::ball(n),
            set,
        },
    )?;
    SqueezeField::new(spec, budget)
}

/// Certifies that the squeezing function of the ball minus a capped sphere
/// is not plurisubharmonic: checks the slice identity
/// `s(z) = (r - ||z||)/(1 - r||z||)` on 20 points of the disc
/// `B_r ∩ {z_2 = ... = z_n = 0}` against a purely numerical minimization,
/// then measures the deficit at the origin along `e_1` for radii
/// `r/4, r/2, 3r/4`.
pub fn verify_capped_sphere(r: f64, eps: f64, n: usize, quad_n: usize) -> Result<SliceCertificate> {
    let field = capped_sphere_field(r, eps, n, set_distance::DEFAULT_BUDGET)?;
    let SpecKind::OmegaMinusSet { omega, set } = &field.spec.kind else {
        unreachable!("capped_sphere_field builds an OmegaMinusSet spec");
    };
    let formula = |t: f64| (r - t) / (1.0 - r * t);
    let mut max_formula_error: f64 = 0.0;
    let mut max_numeric_error: f64 = 0.0;
    let slice_points = 20;
    for k in 0..slice_points {
        let t = 0.9 * r * k as f64 / slice_points as f64;
        let phi = 2.0 * PI * k as f64 / 7.0;
        let mut coords = alloc::vec![Complex64::new(0.0, 0.0); n];
        coords[0] = Complex64::from_polar(t, phi);
        let z = CVector::new(coords)?;
        let exact = formula(t);
        max_formula_error = max_formula_error.max((field.value(&z)? - exact).abs());
        let numeric = set_distance::grid_refine(omega, &z, set, set_distance::DEFAULT_BUDGET)?;
        max_numeric_error = max_numeric_error.max((numeric.value - exact).abs());
    }
    let max_error = max_formula_error.max(max_numeric_error);
    if max_error > SLICE_TOLERANCE {
        return Err(Error::SliceIdentity { max_error });
    }
    let center = CVector::zeros(n);
    let dirs = alloc::vec![alloc::vec![CVector::basis(n, 0)]];
    let radii = [0.25 * r, 0.5 * r, 0.75 * r];
    let report = scan_discs(&field, &[center], &dirs, &radii, quad_n, DEFAULT_TOLERANCE)?;
    Ok(SliceCertificate {
        slice_points,
        max_formula_error,
        max_numeric_error,
        report,
    })
}
