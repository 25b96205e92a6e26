//! Command-line surface. Every parsed command is also the `spec` block of
//! its JSON report, so the flags needed to reproduce a run travel with it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "squeeze",
    version,
    about = "Squeezing functions, Caratheodory distances and their certificates"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "SQUEEZE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "camelCase", tag = "command")]
pub enum Command {
    /// Evaluate a catalog invariant on a grid.
    Eval(EvalArgs),
    /// Set distance d^S(z) = min tanh c(z, w) over w in S.
    Dist(DistArgs),
    /// Search for discs violating the sub-mean-value inequality.
    Psh(PshArgs),
    /// Build a non-plurisubharmonic construction and write it as JSON.
    Construct(ConstructArgs),
    /// Check a construction written by `construct`.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    /// r < ||z|| < 1 in B^n
    AnnulusBall,
    /// D^n minus the closed polydisk of radius r
    PolydiskMinusPolydisk,
    /// D^n minus the closed ball of radius r
    PolydiskMinusBall,
    /// B^n minus the closed polydisk of radius r (r < 1/sqrt(n))
    BallMinusPolydisk,
    /// D^n minus the origin (bounds only)
    PuncturedPolydisk,
    /// D* x D^{n-1} (bounds only)
    PuncturedDiskTimesPolydisk,
    /// B^n minus the origin
    PuncturedBall,
    /// B^n minus the origin, polydisk model
    PuncturedBallPolydisk,
    /// D minus the origin
    PuncturedDisk,
    /// r < |z| < 1 in C
    Annulus,
}

/// Domain selection shared by `eval` and `psh`.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DomainArgs {
    /// Catalog domain.
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub domain: Option<DomainKind>,
    /// JSON DomainSpec file (any catalog entry, including Omega minus a set).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Radius parameter of the domain.
    #[arg(long)]
    pub r: Option<f64>,
    /// Complex dimension (default 2, or 1 for the planar domains).
    #[arg(long)]
    pub n: Option<usize>,
}

/// Where to evaluate.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridArgs {
    /// `a:b:count`: points t u for count values of t from a to b.
    #[arg(long, conflicts_with_all = ["grid", "points"])]
    pub ray: Option<String>,
    /// Direction u for --ray as re,im pairs (`re1,im1,re2,im2,...`); e_1 by default.
    #[arg(long, requires = "ray", allow_hyphen_values = true)]
    pub dir: Option<String>,
    /// `AXIS=lo:hi:count` with AXIS one of re1, im1, re2, ...; repeat for a
    /// product grid, unlisted axes are 0.
    #[arg(long, conflicts_with = "points")]
    pub grid: Vec<String>,
    /// Point list: JSON array of points (each a list of [re, im]) or CSV
    /// with z1_re, z1_im, ... columns.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Grid seeds for numerical minimizations.
    #[arg(long, default_value_t = squeeze_core::set_distance::DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaKind {
    Ball,
    Polydisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetChoice {
    /// ||w|| = r
    Sphere,
    /// max |w_i| = r
    PolydiskShell,
    /// ||w|| = r minus the cap of radius eps around (0, ..., 0, r)
    CappedSphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistMethod {
    /// Closed form where known, refinement otherwise.
    Auto,
    /// Grid seeding and pattern search only.
    Refine,
    /// Brute-force sampling upper bound.
    Oracle,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DistArgs {
    #[arg(long, value_enum, default_value_t = OmegaKind::Ball)]
    pub omega: OmegaKind,
    /// Built-in deleted set.
    #[arg(long, value_enum, conflicts_with = "set_file")]
    pub set: Option<SetChoice>,
    /// JSON BoundarySet file (hyperplanes, points, ...).
    #[arg(long)]
    pub set_file: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Cap radius for the capped sphere.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = DistMethod::Auto)]
    pub method: DistMethod,
    #[arg(long, default_value_t = squeeze_core::set_distance::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Samples for the oracle method.
    #[arg(long, default_value_t = squeeze_core::set_distance::DEFAULT_ORACLE_SAMPLES)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    /// Ball minus a sphere with a cap removed: slice identity and deficit at 0.
    CappedSphere,
    /// max_i |z_i| on D^n.
    MaxModulus,
    /// ||z|| on B^n.
    Norm,
    /// Squeezing function of a construction (--config).
    Config,
    /// Catalog invariant (--domain or --spec).
    Domain,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PshArgs {
    #[arg(long, value_enum)]
    pub fixture: Fixture,
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Construction file for --fixture config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Quasi-random centers (the origin is always included for constructions).
    #[arg(long, default_value_t = 16)]
    pub centers: usize,
    /// Centers are drawn from the ball of this Euclidean radius.
    #[arg(long, default_value_t = 0.5)]
    pub center_radius: f64,
    /// Random unit directions per center.
    #[arg(long, default_value_t = squeeze_core::psh::DEFAULT_DIRECTIONS)]
    pub directions: usize,
    /// Disc radii, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    pub radii: Vec<f64>,
    #[arg(long, default_value_t = squeeze_core::psh::DEFAULT_QUAD_N)]
    pub quad_n: usize,
    #[arg(long, default_value_t = squeeze_core::psh::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = squeeze_core::set_distance::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructKind {
    /// Unit disc minus m equispaced points.
    Disk,
    /// B^n minus hyperplanes through a covering of the sphere.
    Ball,
    /// D^n minus hyperplanes {w_1 = p}.
    Polydisk,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: ConstructKind,
    #[arg(long)]
    pub r: f64,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub big_r: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Candidate points for the sphere covering (ball only).
    #[arg(long, default_value_t = squeeze_core::constructions::DEFAULT_COVER_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyArgs {
    /// Construction file written by `construct`.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = squeeze_core::constructions::DEFAULT_VERIFY_SAMPLES)]
    pub samples: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}
