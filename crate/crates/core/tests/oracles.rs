//! Brute-force minimization written independently of the library: its own
//! distance formulas, its own Gaussian sampler, and random local polishing.

use num_complex::Complex64;
use squeeze_core::catalog::{squeeze_ball_minus_polydisk, squeeze_polydisk_minus_ball};
use squeeze_core::set_distance::{dist_generic, dist_hyperplanes_in_ball, grid_refine};
use squeeze_core::{BoundarySet, CVector, Hyperplane, ModelDomain};

type V = Vec<Complex64>;

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn gauss(&mut self) -> f64 {
        let u = self.next().max(1e-300);
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * self.next()).cos()
    }

    fn gauss_vec(&mut self, n: usize) -> V {
        (0..n).map(|_| Complex64::new(self.gauss(), self.gauss())).collect()
    }
}

fn norm(v: &V) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &V, b: &V) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn ball_tanh(a: &V, z: &V) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let q = (1.0 - norm(a).powi(2)) * (1.0 - norm(z).powi(2)) / (one - inner(z, a)).norm_sqr();
    (1.0 - q).max(0.0).sqrt()
}

fn polydisk_tanh(a: &V, z: &V) -> f64 {
    a.iter()
        .zip(z)
        .map(|(x, y)| ((y - x) / (Complex64::new(1.0, 0.0) - x.conj() * y)).norm())
        .fold(0.0, f64::max)
}

/// Minimizes `f(project(x))` over parameters `x` in `C^n`: random starts,
/// then random perturbations of the parameter with a shrinking radius.
fn brute_min(n: usize, f: impl Fn(&V) -> f64, project: impl Fn(V) -> Option<V>, seed: u64) -> f64 {
    let mut rng = XorShift(seed | 1);
    let mut best = f64::INFINITY;
    let mut at: V = vec![];
    for _ in 0..200_000 {
        let x = rng.gauss_vec(n);
        if let Some(w) = project(x.clone()) {
            let v = f(&w);
            if v < best {
                best = v;
                at = x;
            }
        }
    }
    let mut radius = 0.05;
    while radius > 1e-10 {
        let mut improved = false;
        for _ in 0..200 {
            let trial: V = at.iter().zip(rng.gauss_vec(n)).map(|(a, g)| a + g * radius).collect();
            if let Some(w) = project(trial.clone()) {
                let v = f(&w);
                if v < best {
                    best = v;
                    at = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            radius *= 0.5;
        }
    }
    best
}

fn cv(v: &V) -> CVector {
    CVector::new(v.clone()).unwrap()
}

fn sphere(r: f64) -> impl Fn(V) -> Option<V> {
    move |g: V| {
        let s = norm(&g);
        (s > 0.0).then(|| g.iter().map(|c| c * (r / s)).collect())
    }
}

fn polydisk_shell(r: f64) -> impl Fn(V) -> Option<V> {
    // push the largest coordinate onto |w_k| = r, clip the others to |w_i| <= r
    move |g: V| {
        let k = (0..g.len()).max_by(|&i, &j| g[i].norm().total_cmp(&g[j].norm()))?;
        let big = g[k].norm();
        (big > 0.0).then(|| {
            g.iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == k {
                        c * (r / big)
                    } else {
                        c * (r / c.norm()).min(1.0)
                    }
                })
                .collect()
        })
    }
}

#[test]
fn sphere_in_polydisk_spot_value() {
    // n = 2, z = (0.5, 0.5), r = 0.25: equal moduli give w = (r/sqrt2)(1, 1)
    let z: V = vec![Complex64::new(0.5, 0.0); 2];
    let a = 0.25 / 2f64.sqrt();
    let exact = (0.5 - a) / (1.0 - 0.5 * a);
    assert!((exact - 0.35456).abs() < 1e-5);
    let lib = squeeze_polydisk_minus_ball(&cv(&z), 0.25, 10_000).unwrap();
    let brute = brute_min(2, |w| polydisk_tanh(&z, w), sphere(0.25), 3);
    assert!((lib - exact).abs() < 1e-8, "{lib} vs {exact}");
    assert!((brute - exact).abs() < 1e-6);
}

#[test]
fn sphere_in_polydisk_random_points() {
    let mut rng = XorShift(77);
    for _ in 0..5 {
        let z: V = (0..2)
            .map(|_| Complex64::from_polar(0.3 + 0.6 * rng.next(), 6.3 * rng.next()))
            .collect();
        let r = 0.2;
        let lib = squeeze_polydisk_minus_ball(&cv(&z), r, 10_000).unwrap();
        let brute = brute_min(2, |w| polydisk_tanh(&z, w), sphere(r), 5);
        assert!((lib - brute).abs() < 1e-6, "{lib} vs {brute}");
    }
}

#[test]
fn polydisk_shell_in_ball() {
    let mut rng = XorShift(91);
    let r = 0.3;
    for _ in 0..5 {
        let z: V = rng.gauss_vec(2);
        let s = norm(&z);
        let z: V = z.iter().map(|c| c * (0.5 + 0.4 * rng.next()) / s).collect();
        let lib = squeeze_ball_minus_polydisk(&cv(&z), r, 10_000).unwrap();
        let brute = brute_min(2, |w| ball_tanh(&z, w), polydisk_shell(r), 7);
        assert!((lib - brute).abs() < 1e-6, "{lib} vs {brute}");
    }
}

#[test]
fn polydisk_shell_from_inside_in_the_polydisk() {
    // derived: (r - max|z_i|)/(1 - r max|z_i|) when max|z_i| < r
    let omega = ModelDomain::polydisk(2);
    let set = BoundarySet::polydisk_shell(2, 0.6).unwrap();
    for z in [
        vec![Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.0)],
        vec![Complex64::new(0.0, 0.0); 2],
    ] {
        let m = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let derived = (0.6 - m) / (1.0 - 0.6 * m);
        let lib = dist_generic(&omega, &cv(&z), &set, 10_000).unwrap().value;
        let brute = brute_min(2, |w| polydisk_tanh(&z, w), polydisk_shell(0.6), 11);
        assert!((lib - derived).abs() < 1e-8);
        assert!((brute - derived).abs() < 1e-6);
    }
}

#[test]
fn hyperplane_closed_form_off_origin() {
    let mut rng = XorShift(5);
    for _ in 0..5 {
        let p: V = rng.gauss_vec(2).iter().map(|c| c * 0.2).collect();
        let v: V = rng.gauss_vec(2);
        let z: V = rng.gauss_vec(2).iter().map(|c| c * 0.2).collect();
        let h = Hyperplane::new(cv(&p), cv(&v)).unwrap();
        let lib = dist_hyperplanes_in_ball(&cv(&z), std::slice::from_ref(&h))
            .unwrap()
            .value;
        // parameterize the plane by its tangent space through the foot point
        let foot = h.foot();
        let basis = h.tangent_basis();
        let on_plane = |g: V| -> Option<V> {
            let t = g[0];
            let w: V = foot
                .coords()
                .iter()
                .zip(basis[0].coords())
                .map(|(f, b)| f + b * t)
                .collect();
            (norm(&w) < 1.0).then_some(w)
        };
        let brute = brute_min(2, |w| ball_tanh(&z, w), on_plane, 13);
        assert!((lib - brute).abs() < 1e-6, "{lib} vs {brute}");
    }
}

#[test]
fn capped_sphere_slice_matches_numeric_refinement() {
    let r = 0.5;
    let omega = ModelDomain::ball(2);
    let set = BoundarySet::shell_minus_north_cap(2, r, 0.05).unwrap();
    for t in [0.0, 0.1, 0.3] {
        let z = vec![Complex64::new(t, 0.0), Complex64::new(0.0, 0.0)];
        let slice = (r - t) / (1.0 - r * t);
        let numeric = grid_refine(&omega, &cv(&z), &set, 10_000).unwrap().value;
        let brute = brute_min(2, |w| ball_tanh(&z, w), sphere(r), 17);
        assert!((numeric - slice).abs() < 2e-3);
        assert!((brute - slice).abs() < 1e-6);
    }
}
