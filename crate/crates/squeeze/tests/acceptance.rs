//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Run with `cargo test -p squeeze --test acceptance`.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use squeeze_core::catalog::{squeeze_annulus_ball, squeeze_bounds_punctured_polydisk, squeeze_polydisk_minus_polydisk};
use squeeze_core::constructions::{build_ball_config, example_disk_config, verify_config, Config};
use squeeze_core::psh::{self, submean_check, Field};
use squeeze_core::set_distance::{dist_generic, dist_sphere_in_ball, grid_min_oracle, DEFAULT_BUDGET};
use squeeze_core::{minkowski, tanh_c, BoundarySet, CVector, ModelDomain};

const ORACLE_SAMPLES: usize = 100_000;
const ORACLE_SEED: u64 = 2024;

struct SplitMix(u64);

impl SplitMix {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = self.0;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^ (x >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    fn gauss(&mut self) -> f64 {
        let u = self.uniform().max(1e-300);
        (-2.0 * u.ln()).sqrt() * (2.0 * PI * self.uniform()).cos()
    }

    fn unit(&mut self, n: usize) -> CVector {
        let v = CVector::new((0..n).map(|_| Complex64::new(self.gauss(), self.gauss())).collect()).unwrap();
        let len = v.norm();
        v.scale_real(1.0 / len)
    }

    fn polar(&mut self, radius: f64) -> Complex64 {
        Complex64::from_polar(radius, self.range(0.0, 2.0 * PI))
    }

    /// A point of the domain whose gauge is uniform in `[lo, hi)`.
    fn with_gauge(&mut self, d: &ModelDomain, lo: f64, hi: f64) -> CVector {
        let g = self.range(lo, hi);
        match d.kind {
            squeeze_core::ModelKind::Ball => self.unit(d.dim).scale_real(g),
            squeeze_core::ModelKind::Polydisk => {
                let k = (self.next_u64() % d.dim as u64) as usize;
                let coords = (0..d.dim)
                    .map(|i| {
                        let t = if i == k { 1.0 } else { self.uniform() };
                        self.polar(g * t)
                    })
                    .collect();
                CVector::new(coords).unwrap()
            }
        }
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn domains() -> [ModelDomain; 2] {
    [ModelDomain::ball(2), ModelDomain::polydisk(2)]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = SplitMix(1);
    let mut worst: f64 = 0.0;
    for d in domains() {
        let zero = CVector::zeros(d.dim);
        for _ in 0..10_000 {
            let z = rng.with_gauge(&d, 0.0, 0.999);
            worst = worst.max((tanh_c(&d, &zero, &z).unwrap() - minkowski(&d, &z).unwrap()).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max |tanh c(0,z) - gauge(z)| = {worst:.2e} over 2 x 10^4 points in {elapsed:.2?}"),
    )
}

/// Largest `oracle - closed` over the cases, and the count with `closed > oracle`.
struct OracleTally {
    name: &'static str,
    worst_gap: f64,
    inversions: usize,
}

fn tally(name: &'static str, pairs: impl Iterator<Item = (f64, f64)>) -> OracleTally {
    let mut t = OracleTally {
        name,
        worst_gap: 0.0,
        inversions: 0,
    };
    for (closed, oracle) in pairs {
        t.worst_gap = t.worst_gap.max((oracle - closed).abs());
        if closed > oracle {
            t.inversions += 1;
        }
    }
    t
}

/// Shell radii for the oracle comparison.
const SHELL_RADII: (f64, f64) = (0.1, 0.3);
/// Inputs keep this tanh c distance from the deleted set; closer in, a
/// sampled minimum is off by about the sample spacing.
const SET_MARGIN: f64 = 0.05;

/// Draws inputs until `case` returns a pair whose closed form clears the
/// margin, `count` times.
fn oracle_pairs(
    count: usize,
    rng: &mut SplitMix,
    mut case: impl FnMut(&mut SplitMix) -> (f64, Box<dyn FnOnce() -> f64>),
) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (closed, oracle) = case(rng);
        if closed >= SET_MARGIN {
            out.push((closed, oracle()));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = SplitMix(2);
    let ball = ModelDomain::ball(2);
    let poly = ModelDomain::polydisk(2);
    let oracle = |omega: ModelDomain, z: CVector, set: BoundarySet| -> Box<dyn FnOnce() -> f64> {
        Box::new(move || grid_min_oracle(&omega, &z, &set, ORACLE_SAMPLES, ORACLE_SEED).unwrap())
    };
    let (r_lo, r_hi) = SHELL_RADII;

    let annulus = tally(
        "annulus-ball",
        oracle_pairs(100, &mut rng, |rng| {
            let r = rng.range(r_lo, r_hi);
            let z = rng.with_gauge(&ball, r, 0.99);
            let closed = squeeze_annulus_ball(&z, r).unwrap();
            (closed, oracle(ball, z, BoundarySet::sphere_shell(2, r).unwrap()))
        })
        .into_iter(),
    );
    let polydisk = tally(
        "polydisk-minus-polydisk",
        oracle_pairs(100, &mut rng, |rng| {
            let r = rng.range(r_lo, r_hi);
            let z = rng.with_gauge(&poly, r, 0.99);
            let closed = squeeze_polydisk_minus_polydisk(&z, r).unwrap();
            (closed, oracle(poly, z, BoundarySet::polydisk_shell(2, r).unwrap()))
        })
        .into_iter(),
    );
    let sphere = tally(
        "sphere-in-ball",
        oracle_pairs(100, &mut rng, |rng| {
            let r = rng.range(r_lo, r_hi);
            let z = rng.with_gauge(&ball, 0.0, 0.99);
            let closed = dist_sphere_in_ball(&z, r).unwrap();
            (closed, oracle(ball, z, BoundarySet::sphere_shell(2, r).unwrap()))
        })
        .into_iter(),
    );
    let mut k = 0;
    let points = tally(
        "point-set",
        oracle_pairs(100, &mut rng, |rng| {
            k += 1;
            let omega = if k % 2 == 0 { ball } else { poly };
            let m = 1 + (rng.next_u64() % 6) as usize;
            let pts: Vec<CVector> = (0..m).map(|_| rng.with_gauge(&omega, 0.0, 0.95)).collect();
            let z = rng.with_gauge(&omega, 0.0, 0.95);
            let set = BoundarySet::points(pts).unwrap();
            let closed = dist_generic(&omega, &z, &set, DEFAULT_BUDGET).unwrap().value;
            (closed, oracle(omega, z, set))
        })
        .into_iter(),
    );
    let mut k = 0;
    let vertical = tally(
        "vertical-hyperplanes",
        oracle_pairs(100, &mut rng, |rng| {
            k += 1;
            let omega = if k % 2 == 0 { ball } else { poly };
            let m = 1 + (rng.next_u64() % 4) as usize;
            let values: Vec<Complex64> = (0..m)
                .map(|_| {
                    let p = rng.range(0.0, 0.9);
                    rng.polar(p)
                })
                .collect();
            let z = rng.with_gauge(&omega, 0.0, 0.9);
            let set = BoundarySet::vertical_hyperplanes(2, values).unwrap();
            let closed = dist_generic(&omega, &z, &set, DEFAULT_BUDGET).unwrap().value;
            (closed, oracle(omega, z, set))
        })
        .into_iter(),
    );
    let elapsed = start.elapsed();
    let all = [annulus, polydisk, sphere, points, vertical];
    let passed = all.iter().all(|t| t.worst_gap <= 2e-3 && t.inversions == 0) && elapsed < Duration::from_secs(30);
    let detail = all
        .iter()
        .map(|t| format!("{} gap {:.1e}/{} inv", t.name, t.worst_gap, t.inversions))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        passed,
        format!("n = 2, shell r in [{r_lo}, {r_hi}], set margin {SET_MARGIN}: {detail}; {elapsed:.2?}"),
    )
}

fn criterion_3() -> Outcome {
    let z = CVector::from_real(&[0.5, 0.0]).unwrap();
    let annulus = squeeze_annulus_ball(&z, 0.25).unwrap();
    let z = CVector::from_real(&[0.75, 0.2]).unwrap();
    let poly = squeeze_polydisk_minus_polydisk(&z, 0.5).unwrap();
    let z = CVector::from_real(&[0.3, 0.3]).unwrap();
    let bp = squeeze_bounds_punctured_polydisk(&z).unwrap();
    let z = CVector::from_real(&[0.9, 0.8]).unwrap();
    let far = squeeze_bounds_punctured_polydisk(&z).unwrap();
    let inv = 1.0 / 2f64.sqrt();
    let errors = [
        (annulus - 2.0 / 7.0).abs(),
        (poly - 0.4).abs(),
        (bp.lo - 0.3).abs().max((bp.hi - 0.3).abs()),
        (far.lo - inv).abs().max((far.hi - inv).abs()),
    ];
    let worst = errors.iter().copied().fold(0.0, f64::max);
    outcome(
        worst <= 1e-12,
        format!(
            "2/7: {annulus}, 0.4: {poly}, [{}, {}], [{}, {}]; max error {worst:.1e}",
            bp.lo, bp.hi, far.lo, far.hi
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let cert = match psh::verify_capped_sphere(0.5, 0.05, 2, 512) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("certificate failed: {e}")),
    };
    let elapsed = start.elapsed();
    let deficit = cert
        .report
        .violations
        .iter()
        .find(|v| v.radius == 0.25)
        .map(|v| v.deficit);
    let slice = cert.max_formula_error.max(cert.max_numeric_error);
    let ok = slice <= 2e-3
        && cert.slice_points == 20
        && deficit.is_some_and(|d| (d - 3.0 / 14.0).abs() <= 1e-6)
        && elapsed < Duration::from_secs(10);
    outcome(
        ok,
        format!(
            "slice error {slice:.1e} on {} points, deficit {deficit:?} (3/14), {elapsed:.2?}",
            cert.slice_points
        ),
    )
}

fn check_config(name: &str, cfg: &Config) -> (bool, String) {
    let rep = verify_config(cfg, 10_000, 0).unwrap();
    let ok = rep.passed() && (rep.center_value - 0.6).abs() <= 1e-9 && rep.boundary_max < 0.6;
    (
        ok,
        format!(
            "{name} m = {}, center {:.12}, boundary max {:.4}",
            cfg.m, rep.center_value, rep.boundary_max
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let disk = example_disk_config(0.3, 0.6).unwrap();
    let ball = build_ball_config(0.3, 0.6, 2, squeeze_core::constructions::DEFAULT_COVER_BUDGET).unwrap();
    let (disk_ok, disk_text) = check_config("disk", &disk);
    let (ball_ok, ball_text) = check_config("ball", &ball);
    let elapsed = start.elapsed();
    outcome(
        disk.m == 14 && disk_ok && ball_ok && elapsed < Duration::from_secs(60),
        format!("{disk_text}; {ball_text}; {elapsed:.2?}"),
    )
}

fn squeeze_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(args)
        .env_remove("SQUEEZE_SEED")
        .output()
        .expect("binary runs")
}

fn criterion_6() -> Outcome {
    let mut rng = SplitMix(6);
    let mut violations = 0;
    let mut discs = 0;
    for (field, omega) in [
        (
            Box::new(psh::max_modulus_field(2)) as Box<dyn Field>,
            ModelDomain::polydisk(2),
        ),
        (
            Box::new(psh::euclidean_norm_field(2)) as Box<dyn Field>,
            ModelDomain::ball(2),
        ),
    ] {
        for _ in 0..1_000 {
            let c = rng.with_gauge(&omega, 0.0, 0.9);
            let u = rng.unit(2);
            // the disc c + zeta u, |zeta| <= rho, stays inside since |u_i| <= 1
            let rho = 0.95 * (1.0 - minkowski(&omega, &c).unwrap()) * rng.range(0.05, 1.0);
            if submean_check(field.as_ref(), &c, &u, rho, 512, 1e-6).unwrap().is_some() {
                violations += 1;
            }
            discs += 1;
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("corrupted.json");
    let cfg = example_disk_config(0.3, 0.6).unwrap().with_pushed_modulus(0.7).unwrap();
    fs::write(&bad, serde_json::to_string(&cfg).unwrap()).unwrap();
    let code = squeeze_cli(&["verify", "--config", bad.to_str().unwrap()])
        .status
        .code();
    outcome(
        violations == 0 && code == Some(2),
        format!("{violations} violations over {discs} discs; corrupted config exit code {code:?}"),
    )
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let cfg_s = cfg.to_str().unwrap().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "construct",
            "--kind",
            "ball",
            "--r",
            "0.3",
            "--R",
            "0.6",
            "--budget",
            "20000",
        ],
        vec![
            "eval",
            "--domain",
            "polydisk-minus-ball",
            "--r",
            "0.3",
            "--grid",
            "re1=-0.9:0.9:9",
            "--grid",
            "re2=-0.9:0.9:9",
        ],
        vec![
            "eval",
            "--domain",
            "annulus-ball",
            "--r",
            "0.25",
            "--ray",
            "0.3:0.99:100",
            "--format",
            "json",
        ],
        vec![
            "dist",
            "--set",
            "capped-sphere",
            "--r",
            "0.5",
            "--eps",
            "0.05",
            "--ray",
            "0:0.9:10",
            "--method",
            "oracle",
            "--seed",
            "9",
        ],
        vec![
            "dist",
            "--omega",
            "polydisk",
            "--set",
            "sphere",
            "--r",
            "0.4",
            "--grid",
            "re1=0:0.9:4",
            "--grid",
            "im2=0:0.9:4",
            "--format",
            "json",
        ],
        vec!["psh", "--fixture", "norm", "--seed", "3"],
        vec!["psh", "--fixture", "capped-sphere", "--r", "0.5", "--eps", "0.05"],
        vec!["verify", "--config", &cfg_s, "--seed", "17"],
    ];
    let mut differing = Vec::new();
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = if k == 0 && rep == 0 {
                cfg.clone()
            } else {
                dir.path().join(format!("run{k}_{rep}"))
            };
            let mut a = args.clone();
            let p = path.to_str().unwrap().to_string();
            a.extend(["--out", &p]);
            let out = squeeze_cli(&a);
            if !out.status.success() {
                return outcome(false, format!("{args:?} exited with {:?}", out.status.code()));
            }
            outputs.push(fs::read(&path).unwrap());
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(args[0]);
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} commands run twice, differing: {differing:?}", runs.len()),
    )
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("distance identities", criterion_1),
        ("oracle equivalence", criterion_2),
        ("spot values", criterion_3),
        ("capped-sphere certificate", criterion_4),
        ("construction certificates", criterion_5),
        ("negative controls", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", k + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
