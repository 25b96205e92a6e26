use num_complex::Complex64;
use proptest::prelude::*;
use squeeze_core::catalog::{self, squeeze_bounds_punctured_polydisk, squeeze_polydisk_minus_polydisk};
use squeeze_core::psh::{self, circle_mean, scan_psh, FnField};
use squeeze_core::set_distance::{dist_generic, dist_sphere_in_ball, grid_min_oracle};
use squeeze_core::{
    minkowski, tanh_c, tanh_c_ball, tanh_c_polydisk, BoundarySet, CVector, DomainSpec, ModelDomain, SpecKind,
};

fn vector(parts: &[(f64, f64)]) -> CVector {
    CVector::new(parts.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

/// Points of `C^n` (n = 1..=3) with Euclidean norm below `max_norm`.
fn in_ball(n: std::ops::RangeInclusive<usize>, max_norm: f64) -> impl Strategy<Value = CVector> {
    n.prop_flat_map(move |n| {
        (prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n), 0.0f64..1.0).prop_map(move |(v, t)| {
            let z = vector(&v);
            let norm = z.norm();
            if norm == 0.0 {
                z
            } else {
                z.scale_real(max_norm * t / norm)
            }
        })
    })
}

fn pair_in_ball(n: usize, max_norm: f64) -> impl Strategy<Value = (CVector, CVector)> {
    (in_ball(n..=n, max_norm), in_ball(n..=n, max_norm))
}

fn triple_in_ball(n: usize, max_norm: f64) -> impl Strategy<Value = (CVector, CVector, CVector)> {
    (
        in_ball(n..=n, max_norm),
        in_ball(n..=n, max_norm),
        in_ball(n..=n, max_norm),
    )
}

/// Unitary matrix from Gram-Schmidt on a random complex matrix.
fn unitary(n: usize) -> impl Strategy<Value = Vec<CVector>> {
    prop::collection::vec(prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n), n).prop_filter_map(
        "degenerate matrix",
        move |rows| {
            let mut q: Vec<CVector> = Vec::new();
            for row in rows {
                let mut v = vector(&row);
                for b in &q {
                    let c = v.dot(b);
                    v = v.add_scaled(-c, b);
                }
                let len = v.norm();
                if len < 1e-3 {
                    return None;
                }
                q.push(v.scale_real(1.0 / len));
            }
            Some(q)
        },
    )
}

fn apply(u: &[CVector], z: &CVector) -> CVector {
    // row i of U times z
    CVector::new(u.iter().map(|row| z.dot(&row_conj(row))).collect()).unwrap()
}

fn row_conj(row: &CVector) -> CVector {
    CVector::new(row.coords().iter().map(|c| c.conj()).collect()).unwrap()
}

fn c_of(t: f64) -> f64 {
    t.min(1.0 - 1e-15).atanh()
}

proptest! {
    #[test]
    fn minkowski_is_a_norm(
        z in in_ball(1..=3, 0.99),
        lam in (-2.0f64..2.0, -2.0f64..2.0),
        w_seed in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
    ) {
        let lam = Complex64::new(lam.0, lam.1);
        let w = vector(&w_seed[..z.dim()]);
        for d in [ModelDomain::ball(z.dim()), ModelDomain::polydisk(z.dim())] {
            let m = minkowski(&d, &z).unwrap();
            let scaled = minkowski(&d, &z.scale(lam)).unwrap();
            prop_assert!((scaled - lam.norm() * m).abs() <= 1e-12 * (1.0 + scaled));
            let sum = minkowski(&d, &(&z + &w)).unwrap();
            prop_assert!(sum <= m + minkowski(&d, &w).unwrap() + 1e-12);
        }
    }

    #[test]
    fn ball_distance_is_unitarily_invariant(
        (a, z) in pair_in_ball(3, 0.95),
        u in unitary(3),
    ) {
        let before = tanh_c_ball(&a, &z).unwrap();
        let after = tanh_c_ball(&apply(&u, &a), &apply(&u, &z)).unwrap();
        prop_assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn polydisk_distance_invariant_under_rotations_and_permutations(
        (a, z) in pair_in_ball(3, 0.95),
        phases in prop::collection::vec(0.0f64..6.3, 3),
        perm in Just([0usize, 1, 2]).prop_shuffle(),
    ) {
        let before = tanh_c_polydisk(&a, &z).unwrap();
        let move_it = |v: &CVector| {
            CVector::new(perm.iter().map(|&k| v[k] * Complex64::from_polar(1.0, phases[k])).collect()).unwrap()
        };
        let after = tanh_c_polydisk(&move_it(&a), &move_it(&z)).unwrap();
        prop_assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn distance_symmetric_and_zero_on_diagonal((a, z) in pair_in_ball(2, 0.95)) {
        for d in [ModelDomain::ball(2), ModelDomain::polydisk(2)] {
            let ab = tanh_c(&d, &a, &z).unwrap();
            prop_assert!((ab - tanh_c(&d, &z, &a).unwrap()).abs() < 1e-12);
            prop_assert_eq!(tanh_c(&d, &a, &a).unwrap(), 0.0);
            prop_assert!((0.0..1.0).contains(&ab));
        }
    }

    #[test]
    fn origin_distance_is_minkowski(z in in_ball(1..=3, 0.999)) {
        for d in [ModelDomain::ball(z.dim()), ModelDomain::polydisk(z.dim())] {
            let t = tanh_c(&d, &CVector::zeros(z.dim()), &z).unwrap();
            prop_assert!((t - minkowski(&d, &z).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn triangle_inequality((a, b, z) in triple_in_ball(2, 0.9)) {
        for d in [ModelDomain::ball(2), ModelDomain::polydisk(2)] {
            let ab = c_of(tanh_c(&d, &a, &b).unwrap());
            let az = c_of(tanh_c(&d, &a, &z).unwrap());
            let zb = c_of(tanh_c(&d, &z, &b).unwrap());
            prop_assert!(ab <= az + zb + 1e-9);
        }
    }

    #[test]
    fn one_dimensional_ball_is_the_disc((a, z) in pair_in_ball(1, 0.999)) {
        let b = tanh_c_ball(&a, &z).unwrap();
        let p = tanh_c_polydisk(&a, &z).unwrap();
        prop_assert!((b - p).abs() < 1e-12);
    }

    #[test]
    fn monotone_along_rays(z in in_ball(2..=3, 0.99), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let (s, t) = if s <= t { (s, t) } else { (t, s) };
        let o = CVector::zeros(z.dim());
        for d in [ModelDomain::ball(z.dim()), ModelDomain::polydisk(z.dim())] {
            let near = tanh_c(&d, &o, &z.scale_real(s)).unwrap();
            let far = tanh_c(&d, &o, &z.scale_real(t)).unwrap();
            prop_assert!(near <= far + 1e-15);
        }
    }

    #[test]
    fn polydisk_catalog_invariant_under_symmetries(
        z in in_ball(3..=3, 0.99),
        phases in prop::collection::vec(0.0f64..6.3, 3),
        perm in Just([0usize, 1, 2]).prop_shuffle(),
    ) {
        let r = 0.2;
        prop_assume!(z.max_modulus() > r);
        let moved = CVector::new(perm.iter().map(|&k| z[k] * Complex64::from_polar(1.0, phases[k])).collect()).unwrap();
        let a = squeeze_polydisk_minus_polydisk(&z, r).unwrap();
        let b = squeeze_polydisk_minus_polydisk(&moved, r).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn punctured_polydisk_bounds_pinch_on_equal_moduli(rho in 0.01f64..0.99, phases in prop::collection::vec(0.0f64..6.3, 2)) {
        let z = CVector::new(phases.iter().map(|&p| Complex64::from_polar(rho, p)).collect()).unwrap();
        let iv = squeeze_bounds_punctured_polydisk(&z).unwrap();
        prop_assert!(iv.width() < 1e-12);
        prop_assert!((iv.lo - rho.min(0.5f64.sqrt())).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_never_beats_closed_form(z in in_ball(2..=2, 0.95), r in 0.1f64..0.8, seed in 0u64..1000) {
        let set = BoundarySet::sphere_shell(2, r).unwrap();
        let omega = ModelDomain::ball(2);
        let exact = dist_sphere_in_ball(&z, r).unwrap();
        let oracle = grid_min_oracle(&omega, &z, &set, 5_000, seed).unwrap();
        prop_assert!(oracle >= exact - 1e-12);
    }

    #[test]
    fn removing_a_cap_never_decreases_distance(z in in_ball(2..=2, 0.95), eps in 0.01f64..0.3) {
        let r = 0.5;
        let omega = ModelDomain::ball(2);
        let full = BoundarySet::sphere_shell(2, r).unwrap();
        let capped = BoundarySet::shell_minus_north_cap(2, r, eps).unwrap();
        prop_assume!(!capped.contains_point(&z, 1e-9) && !full.contains_point(&z, 1e-9));
        let a = dist_generic(&omega, &z, &full, 2_000).unwrap().value;
        let b = dist_generic(&omega, &z, &capped, 2_000).unwrap().value;
        prop_assert!(b >= a - 1e-9);
    }

    #[test]
    fn solid_ball_and_its_shell_agree_from_outside(z in in_ball(2..=2, 0.95), seed in 0u64..1000) {
        // d to the compact ball {||w|| <= r} equals d to its boundary sphere
        let r = 0.3;
        prop_assume!(z.norm() > r + 0.05);
        let shell = dist_sphere_in_ball(&z, r).unwrap();
        let ball = ModelDomain::ball(2);
        let seq = squeeze_core::sampling::QuasiSequence::new(4, seed);
        let solid = (0..20_000u64)
            .map(|k| squeeze_core::sampling::ball_point(2, r, &seq.point(k)))
            .map(|w| tanh_c(&ball, &z, &w).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert!(solid >= shell - 1e-12);
        prop_assert!(solid - shell < 2e-2);
    }
}

#[test]
fn harmonic_means_are_exact() {
    let f = FnField::new(
        "re z1^3 + im z1 z2",
        |z: &CVector| (z[0] * z[0] * z[0]).re + (z[0] * z[1]).im,
        |_: &CVector| true,
    );
    let center = CVector::new(vec![Complex64::new(0.2, -0.1), Complex64::new(0.05, 0.3)]).unwrap();
    let dir = CVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
    let mean = circle_mean(&f, &center, &dir, 0.4, 64).unwrap();
    let fc = (center[0] * center[0] * center[0]).re + (center[0] * center[1]).im;
    assert!((mean - fc).abs() < 1e-10);
}

#[test]
fn doubling_quadrature_is_converged_on_smooth_fields() {
    let annulus = psh::SqueezeField::new(DomainSpec::new(2, SpecKind::AnnulusBall { r: 0.2 }).unwrap(), 1_000).unwrap();
    let punctured = psh::SqueezeField::new(DomainSpec::new(3, SpecKind::PuncturedBall).unwrap(), 1_000).unwrap();
    let cases: [(&dyn psh::Field, CVector, CVector, f64); 2] = [
        (
            &annulus,
            vector(&[(0.5, 0.1), (0.0, -0.2)]),
            vector(&[(0.6, 0.0), (0.0, 0.8)]),
            0.15,
        ),
        (
            &punctured,
            vector(&[(0.3, 0.0), (0.1, 0.1), (0.0, 0.2)]),
            vector(&[(0.0, 1.0), (0.0, 0.0), (0.0, 0.0)]),
            0.2,
        ),
    ];
    for (f, c, d, rho) in cases {
        let m1 = circle_mean(f, &c, &d, rho, 256).unwrap();
        let m2 = circle_mean(f, &c, &d, rho, 512).unwrap();
        assert!((m1 - m2).abs() < 1e-8, "{m1} vs {m2}");
    }
}

#[test]
fn psh_fields_scan_clean() {
    for n in [2usize, 3] {
        let centers: Vec<CVector> = squeeze_core::sampling::sphere_points(n, 0.3, 20, 9).collect();
        let radii = [0.05, 0.2, 0.4];
        let a = scan_psh(&psh::max_modulus_field(n), &centers, 8, &radii, 512, 1e-9, 3).unwrap();
        let b = scan_psh(&psh::euclidean_norm_field(n), &centers, 8, &radii, 512, 1e-9, 3).unwrap();
        assert!(a.violations.is_empty() && b.violations.is_empty());
        assert_eq!(a.scanned + a.skipped, 20 * 8 * 3);
        assert!(a.scanned > 0 && b.scanned > 0);
    }
}

#[test]
fn capped_sphere_deficit_is_exact_on_the_slice() {
    let r = 0.5;
    let f = psh::capped_sphere_field(r, 0.05, 2, 1_000).unwrap();
    let e1 = CVector::basis(2, 0);
    for rho in [0.1, 0.25, 0.4] {
        let v = psh::submean_check(&f, &CVector::zeros(2), &e1, rho, 512, 1e-6)
            .unwrap()
            .unwrap();
        let expected = r - (r - rho) / (1.0 - r * rho);
        assert!((v.deficit - expected).abs() < 1e-10);
    }
}

#[test]
fn catalog_specs_roundtrip_through_evaluate() {
    let z = vector(&[(0.5, 0.0), (0.0, 0.2)]);
    let spec = DomainSpec::new(2, SpecKind::AnnulusBall { r: 0.25 }).unwrap();
    let v = spec.evaluate(&z, 1_000).unwrap().exact().unwrap();
    assert!((v - catalog::squeeze_annulus_ball(&z, 0.25).unwrap()).abs() < 1e-15);
    let omega = ModelDomain::ball(2);
    let set = BoundarySet::sphere_shell(2, 0.25).unwrap();
    let gen = catalog::squeeze_omega_minus_set(&omega, &set, &z, 1_000).unwrap();
    assert!((gen.result.value - v).abs() < 1e-12);
    assert!(gen.fridman_equality);
}
