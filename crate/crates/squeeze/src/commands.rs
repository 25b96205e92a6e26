//! Execution of the five subcommands.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use squeeze_core::constructions::{self, Config};
use squeeze_core::psh::{self, Field, PshReport, SqueezeField};
use squeeze_core::sampling::{self, QuasiSequence};
use squeeze_core::set_distance::{self, BoundarySet, Method};
use squeeze_core::{CVector, DomainSpec, Error, Invariant, ModelDomain, SpecKind};

use crate::args::{
    Cli, Command, ConstructArgs, ConstructKind, DistArgs, DistMethod, DomainArgs, DomainKind, EvalArgs, Fixture,
    Format, OmegaKind, PshArgs, SetChoice, VerifyArgs,
};
use crate::grid;
use crate::output::{self, coordinate_fields, coordinate_header, number, Envelope, Meta};

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A certificate was computed and came out negative.
    VerificationFailed,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Eval(a) => eval(&cli.command, a, seed),
        Command::Dist(a) => dist(&cli.command, a, seed),
        Command::Psh(a) => psh_cmd(&cli.command, a, seed),
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(&cli.command, a, seed),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {what} from {}", path.display()))
}

fn need_r(r: Option<f64>, what: &str) -> Result<f64> {
    r.ok_or_else(|| anyhow!("{what} needs --r"))
}

pub fn domain_spec(args: &DomainArgs) -> Result<DomainSpec> {
    if let Some(path) = &args.spec {
        let spec: DomainSpec = read_json(path, "domain spec")?;
        spec.validate()?;
        return Ok(spec);
    }
    let kind = args.domain.ok_or_else(|| anyhow!("give --domain or --spec"))?;
    let planar = matches!(kind, DomainKind::PuncturedDisk | DomainKind::Annulus);
    let n = args.n.unwrap_or(if planar { 1 } else { 2 });
    let r = args.r;
    let kind = match kind {
        DomainKind::AnnulusBall => SpecKind::AnnulusBall {
            r: need_r(r, "annulus-ball")?,
        },
        DomainKind::PolydiskMinusPolydisk => SpecKind::PolydiskMinusPolydisk {
            r: need_r(r, "polydisk-minus-polydisk")?,
        },
        DomainKind::PolydiskMinusBall => SpecKind::PolydiskMinusBall {
            r: need_r(r, "polydisk-minus-ball")?,
        },
        DomainKind::BallMinusPolydisk => SpecKind::BallMinusPolydisk {
            r: need_r(r, "ball-minus-polydisk")?,
        },
        DomainKind::PuncturedPolydisk => SpecKind::PuncturedPolydisk,
        DomainKind::PuncturedDiskTimesPolydisk => SpecKind::PuncturedDiskTimesPolydisk,
        DomainKind::PuncturedBall => SpecKind::PuncturedBall,
        DomainKind::PuncturedBallPolydisk => SpecKind::PuncturedBallPolydiskModel,
        DomainKind::PuncturedDisk => SpecKind::PuncturedDisk,
        DomainKind::Annulus => SpecKind::Annulus1d {
            r: need_r(r, "annulus")?,
        },
    };
    Ok(DomainSpec::new(n, kind)?)
}

fn has_bounds(spec: &DomainSpec) -> bool {
    matches!(
        spec.kind,
        SpecKind::PuncturedPolydisk | SpecKind::PuncturedDiskTimesPolydisk
    )
}

#[derive(Debug, Serialize)]
struct EvalRow {
    z: CVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<f64>,
}

/// Evaluates `f` on every point in parallel; `None` marks a skipped point.
/// Rows come back in grid order.
fn map_points<T: Send>(
    points: &[CVector],
    f: impl Fn(&CVector) -> Result<Option<T>> + Sync,
) -> Result<(Vec<(CVector, T)>, usize)> {
    let out: Vec<Option<(CVector, T)>> = points
        .par_iter()
        .map(|z| Ok(f(z)?.map(|v| (z.clone(), v))))
        .collect::<Result<_>>()?;
    let skipped = out.iter().filter(|r| r.is_none()).count();
    Ok((out.into_iter().flatten().collect(), skipped))
}

fn report_skipped(skipped: usize) {
    if skipped > 0 {
        eprintln!("skipped {skipped} point(s) outside the domain");
    }
}

fn eval(spec_block: &Command, a: &EvalArgs, seed: u64) -> Result<Outcome> {
    let spec = domain_spec(&a.domain)?;
    let points = grid::points(&a.grid, spec.dim)?;
    let (rows, skipped) = map_points(&points, |z| {
        if !spec.contains(z) {
            return Ok(None);
        }
        match spec.evaluate(z, a.budget) {
            Ok(v) => Ok(Some(v)),
            Err(Error::OutsideDomain(_)) => Ok(None),
            Err(e) => Err(e.into()),
        }
    })?;
    report_skipped(skipped);
    let out = a.output.out.as_deref();
    match a.output.format {
        Format::Csv => {
            let mut header = coordinate_header("z", spec.dim);
            if has_bounds(&spec) {
                header.extend(["lo".to_string(), "hi".to_string()]);
            } else {
                header.push("value".to_string());
            }
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|(z, v)| {
                    let mut row = coordinate_fields(z);
                    match v {
                        Invariant::Exact(x) => row.push(number(*x)),
                        Invariant::Bounds(iv) => row.extend([number(iv.lo), number(iv.hi)]),
                    }
                    row
                })
                .collect();
            output::write_csv(out, &header, &table)
        }
        Format::Json => {
            let results: Vec<EvalRow> = rows
                .into_iter()
                .map(|(z, v)| match v {
                    Invariant::Exact(x) => EvalRow {
                        z,
                        value: Some(x),
                        lo: None,
                        hi: None,
                    },
                    Invariant::Bounds(iv) => EvalRow {
                        z,
                        value: None,
                        lo: Some(iv.lo),
                        hi: Some(iv.hi),
                    },
                })
                .collect();
            #[derive(Serialize)]
            struct Results<'a> {
                domain: &'a DomainSpec,
                rows: Vec<EvalRow>,
            }
            output::write_json(
                out,
                &Envelope {
                    spec: spec_block,
                    results: Results {
                        domain: &spec,
                        rows: results,
                    },
                    meta: Meta {
                        seed,
                        samples: a.budget,
                        tool_version: output::TOOL_VERSION,
                        skipped: Some(skipped),
                    },
                },
            )
        }
    }?;
    Ok(Outcome::Success)
}

fn deleted_set(a: &DistArgs) -> Result<BoundarySet> {
    if let Some(path) = &a.set_file {
        let set: BoundarySet = read_json(path, "deleted set")?;
        set.validate()?;
        return Ok(set);
    }
    let choice = a.set.ok_or_else(|| anyhow!("give --set or --set-file"))?;
    let r = need_r(a.r, "the deleted set")?;
    Ok(match choice {
        SetChoice::Sphere => BoundarySet::sphere_shell(a.n, r)?,
        SetChoice::PolydiskShell => BoundarySet::polydisk_shell(a.n, r)?,
        SetChoice::CappedSphere => {
            let eps = a.eps.ok_or_else(|| anyhow!("capped-sphere needs --eps"))?;
            BoundarySet::shell_minus_north_cap(a.n, r, eps)?
        }
    })
}

#[derive(Debug, Serialize)]
struct DistRow {
    z: CVector,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    argmin: Option<CVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closedForm",
        Method::GridRefine => "gridRefine",
        Method::Sampling => "sampling",
    }
}

fn dist(spec_block: &Command, a: &DistArgs, seed: u64) -> Result<Outcome> {
    let set = deleted_set(a)?;
    let n = set.dim;
    let omega = match a.omega {
        OmegaKind::Ball => ModelDomain::ball(n),
        OmegaKind::Polydisk => ModelDomain::polydisk(n),
    };
    set.validate_in(&omega)?;
    let points = grid::points(&a.grid, n)?;
    let (rows, skipped) = map_points(&points, |z| {
        if !omega.holds(z) {
            return Ok(None);
        }
        Ok(Some(match a.method {
            DistMethod::Auto => {
                let m = set_distance::dist_generic(&omega, z, &set, a.budget)?;
                (m.value, Some(m))
            }
            DistMethod::Refine => {
                let m = set_distance::grid_refine(&omega, z, &set, a.budget)?;
                (m.value, Some(m))
            }
            DistMethod::Oracle => (set_distance::grid_min_oracle(&omega, z, &set, a.samples, seed)?, None),
        }))
    })?;
    report_skipped(skipped);
    let out = a.output.out.as_deref();
    let samples = if a.method == DistMethod::Oracle {
        a.samples
    } else {
        a.budget
    };
    match a.output.format {
        Format::Csv => {
            let mut header = coordinate_header("z", n);
            header.push("value".into());
            if a.method != DistMethod::Oracle {
                header.extend(coordinate_header("w", n));
                header.extend(["method", "samples", "converged"].map(String::from));
            }
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|(z, (value, detail))| {
                    let mut row = coordinate_fields(z);
                    row.push(number(*value));
                    if let Some(m) = detail {
                        row.extend(coordinate_fields(&m.argmin));
                        row.push(method_name(m.method).to_string());
                        row.push(m.samples.to_string());
                        row.push(m.converged.to_string());
                    }
                    row
                })
                .collect();
            output::write_csv(out, &header, &table)
        }
        Format::Json => {
            let results: Vec<DistRow> = rows
                .into_iter()
                .map(|(z, (value, detail))| DistRow {
                    z,
                    value,
                    method: detail.as_ref().map(|m| m.method),
                    samples: detail.as_ref().map(|m| m.samples),
                    converged: detail.as_ref().map(|m| m.converged),
                    argmin: detail.map(|m| m.argmin),
                })
                .collect();
            output::write_json(
                out,
                &Envelope {
                    spec: spec_block,
                    results,
                    meta: Meta {
                        seed,
                        samples,
                        tool_version: output::TOOL_VERSION,
                        skipped: Some(skipped),
                    },
                },
            )
        }
    }?;
    Ok(Outcome::Success)
}

/// Scans every center in parallel; directions are drawn up front in center
/// order, so the report equals the sequential `psh::scan_psh` one.
pub fn parallel_scan(
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
    let parts: Vec<PshReport> = centers
        .par_iter()
        .zip(dirs.par_iter())
        .map(|(c, d)| psh::scan_discs(f, std::slice::from_ref(c), std::slice::from_ref(d), radii, quad_n, tol))
        .collect::<std::result::Result<_, _>>()?;
    let mut report = PshReport {
        label: f.label().to_string(),
        violations: Vec::new(),
        scanned: 0,
        skipped: 0,
        quadrature_n: quad_n,
        tolerance: tol,
    };
    for p in parts {
        report.violations.extend(p.violations);
        report.scanned += p.scanned;
        report.skipped += p.skipped;
    }
    Ok(report)
}

/// `count` quasi-random points of the ball of radius `radius` in `C^n` that
/// lie in the field's domain (at most `20 count` candidates are tried).
fn centers_in(f: &dyn Field, n: usize, radius: f64, count: usize, seed: u64) -> Vec<CVector> {
    let seq = QuasiSequence::new(sampling::ball_dims(n), seed);
    (0..20 * count.max(1) as u64)
        .map(|k| sampling::ball_point(n, radius, &seq.point(k)))
        .filter(|z| f.contains(z))
        .take(count)
        .collect()
}

fn psh_cmd(spec_block: &Command, a: &PshArgs, seed: u64) -> Result<Outcome> {
    let write = |results: serde_json::Value, samples: usize| -> Result<()> {
        output::write_json(
            a.out.as_deref(),
            &Envelope {
                spec: spec_block,
                results: &results,
                meta: Meta {
                    seed,
                    samples,
                    tool_version: output::TOOL_VERSION,
                    skipped: None,
                },
            },
        )
    };
    if !(a.center_radius > 0.0 && a.center_radius < 1.0) {
        bail!("--center-radius must lie in (0, 1)");
    }
    match a.fixture {
        Fixture::CappedSphere => {
            let r = need_r(a.domain.r, "capped-sphere")?;
            let eps = a.eps.ok_or_else(|| anyhow!("capped-sphere needs --eps"))?;
            let n = a.domain.n.unwrap_or(2);
            match psh::verify_capped_sphere(r, eps, n, a.quad_n) {
                Ok(cert) => {
                    let failed = cert.report.violations.is_empty();
                    write(serde_json::to_value(&cert)?, cert.report.scanned)?;
                    // the field is expected to fail the sub-mean-value inequality at 0
                    Ok(if failed {
                        Outcome::VerificationFailed
                    } else {
                        Outcome::Success
                    })
                }
                Err(Error::SliceIdentity { max_error }) => {
                    eprintln!("slice identity failed: max error {max_error}");
                    Ok(Outcome::VerificationFailed)
                }
                Err(e) => Err(e.into()),
            }
        }
        Fixture::MaxModulus | Fixture::Norm => {
            let n = a.domain.n.unwrap_or(2);
            let field: Box<dyn Field> = if a.fixture == Fixture::MaxModulus {
                Box::new(psh::max_modulus_field(n))
            } else {
                Box::new(psh::euclidean_norm_field(n))
            };
            let centers = centers_in(field.as_ref(), n, a.center_radius, a.centers, seed);
            let rep = parallel_scan(field.as_ref(), &centers, a.directions, &a.radii, a.quad_n, a.tol, seed)?;
            write(serde_json::to_value(&rep)?, rep.scanned)?;
            Ok(Outcome::Success)
        }
        Fixture::Config => {
            let path = a
                .config
                .as_ref()
                .ok_or_else(|| anyhow!("--fixture config needs --config"))?;
            let cfg: Config = read_json(path, "construction")?;
            cfg.validate()?;
            let field = cfg.field(a.budget)?;
            let n = cfg.dim();
            let mut centers = vec![CVector::zeros(n)];
            centers.extend(sampling::sphere_points(n, cfg.r, a.centers, seed));
            let rep = parallel_scan(&field, &centers, a.directions, &a.radii, a.quad_n, a.tol, seed)?;
            write(serde_json::to_value(&rep)?, rep.scanned)?;
            Ok(Outcome::Success)
        }
        Fixture::Domain => {
            let spec = domain_spec(&a.domain)?;
            let n = spec.dim;
            let field = SqueezeField::new(spec, a.budget)?;
            let centers = centers_in(&field, n, a.center_radius, a.centers, seed);
            let rep = parallel_scan(&field, &centers, a.directions, &a.radii, a.quad_n, a.tol, seed)?;
            write(serde_json::to_value(&rep)?, rep.scanned)?;
            Ok(Outcome::Success)
        }
    }
}

fn construct(a: &ConstructArgs) -> Result<Outcome> {
    let cfg = match a.kind {
        ConstructKind::Disk => constructions::example_disk_config(a.r, a.big_r)?,
        ConstructKind::Ball => constructions::build_ball_config(a.r, a.big_r, a.n, a.budget)?,
        ConstructKind::Polydisk => constructions::build_polydisk_config(a.r, a.big_r, a.n)?,
    };
    output::write_json(a.out.as_deref(), &cfg)?;
    Ok(Outcome::Success)
}

fn verify(spec_block: &Command, a: &VerifyArgs, seed: u64) -> Result<Outcome> {
    let cfg: Config = read_json(&a.config, "construction")?;
    let report = constructions::verify_config(&cfg, a.samples, seed)?;
    output::write_json(
        a.out.as_deref(),
        &Envelope {
            spec: spec_block,
            results: &report,
            meta: Meta {
                seed,
                samples: a.samples,
                tool_version: output::TOOL_VERSION,
                skipped: None,
            },
        },
    )?;
    Ok(if report.passed() {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}
