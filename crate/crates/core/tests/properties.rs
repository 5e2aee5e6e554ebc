//! Invariants checked on random inputs.

use bnet::closed_forms::{big_psi, small_psi};
use bnet::experiments::{run_suite, write_reports_csv, Budget, Overrides, Suite};
use bnet::lattice::{
    check_noncrossing, sample_config, trace_extremal, trace_random_branch, validate_path, Side,
    Window,
};
use bnet::particles::{evolve, full_slice, ParticleSet};
use bnet::pathspace::{
    hausdorff_dist, path_dist, point_dist, theta_map, CompactPoint, SampledPath,
};
use bnet::sde::{sample_noise, solve_lr, sticky_time, sticky_time_at_horizon};
use proptest::prelude::*;

const STEP: f64 = 0.25;

/// A path on the grid `sigma + k STEP` ending at time 4, with `sigma` on
/// the same grid so that any two such paths are comparable.
fn sampled_path() -> impl Strategy<Value = SampledPath> {
    (0usize..12).prop_flat_map(|k0| {
        let n = 16 - k0 + 1;
        prop::collection::vec(-20.0f64..20.0, n)
            .prop_map(move |v| SampledPath::new(k0 as f64 * STEP, STEP, v).unwrap())
    })
}

fn close(a: f64, b: f64) -> bool {
    a <= b + 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_metric_axioms(a in sampled_path(), b in sampled_path(), c in sampled_path()) {
        prop_assert_eq!(path_dist(&a, &a).unwrap(), 0.0);
        let ab = path_dist(&a, &b).unwrap();
        prop_assert_eq!(ab, path_dist(&b, &a).unwrap());
        prop_assert!((0.0..=2.0).contains(&ab));
        let bc = path_dist(&b, &c).unwrap();
        let ac = path_dist(&a, &c).unwrap();
        prop_assert!(close(ac, ab + bc));
    }

    #[test]
    fn point_metric_axioms(p in prop::array::uniform6(-30.0f64..30.0)) {
        let pt = |i: usize| CompactPoint::finite(p[2 * i], p[2 * i + 1]).unwrap();
        let (a, b, c) = (pt(0), pt(1), pt(2));
        prop_assert_eq!(point_dist(&a, &a), 0.0);
        prop_assert_eq!(point_dist(&a, &b), point_dist(&b, &a));
        prop_assert!(close(point_dist(&a, &c), point_dist(&a, &b) + point_dist(&b, &c)));
    }

    #[test]
    fn hausdorff_axioms(
        a in prop::collection::vec(sampled_path(), 1..4),
        b in prop::collection::vec(sampled_path(), 1..4),
        c in prop::collection::vec(sampled_path(), 1..4),
    ) {
        prop_assert_eq!(hausdorff_dist(&a, &a).unwrap(), 0.0);
        let ab = hausdorff_dist(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff_dist(&b, &a).unwrap());
        let ac = hausdorff_dist(&a, &c).unwrap();
        prop_assert!(close(ac, ab + hausdorff_dist(&b, &c).unwrap()));
    }

    #[test]
    fn theta_is_monotone_in_space(x in -50.0f64..50.0, dx in 1e-3f64..10.0, t in -20.0f64..20.0) {
        let (u0, v0) = theta_map(&CompactPoint::finite(x, t).unwrap());
        let (u1, v1) = theta_map(&CompactPoint::finite(x + dx, t).unwrap());
        // strict where tanh is resolvable in double precision
        let strict = x.abs() < 8.0;
        prop_assert!(u0 < u1 || (!strict && u0 == u1));
        prop_assert_eq!(v0, v1);
        prop_assert!(u0.abs() <= 1.0 && v0.abs() <= 1.0);
    }

    #[test]
    fn avoidance_function_is_a_monotone_probability(e in 0.0f64..5.0, de in 0.0f64..2.0, t in 0.05f64..10.0) {
        let a = big_psi(e, t).unwrap();
        let b = big_psi(e + de, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(a <= b + 1e-14);
    }

    #[test]
    fn density_decreases_to_two(t in 0.05f64..20.0, dt in 0.01f64..5.0) {
        let a = small_psi(t).unwrap();
        prop_assert!(a > 2.0);
        prop_assert!(small_psi(t + dt).unwrap() < a);
    }

    #[test]
    fn arrow_field_is_a_pure_function_of_the_seed(beta in 0.0f64..=1.0, seed in any::<u64>()) {
        let w = Window::centered(20, 0, 10).unwrap();
        let a = sample_config(w, beta, seed).unwrap();
        let b = sample_config(w, beta, seed).unwrap();
        prop_assert_eq!(a.states(), b.states());
        // a sub-window sees the same field
        let sub = a.with_window(Window::centered(6, 2, 8).unwrap());
        prop_assert_eq!(sub.state(2, 4), a.state(2, 4));
    }

    #[test]
    fn forward_and_dual_paths_never_cross(beta in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = sample_config(Window::centered(30, 0, 20).unwrap(), beta, seed).unwrap();
        prop_assert!(check_noncrossing(&cfg));
    }

    #[test]
    fn random_branch_paths_lie_between_the_extremal_ones(
        beta in 0.0f64..=1.0,
        seed in any::<u64>(),
        pick in any::<u64>(),
        x in -5i64..=5,
    ) {
        let cfg = sample_config(Window::centered(40, 0, 30).unwrap(), beta, seed).unwrap();
        let x = 2 * x;
        let l = trace_extremal(&cfg, (x, 0), Side::Left).unwrap();
        let r = trace_extremal(&cfg, (x, 0), Side::Right).unwrap();
        let p = trace_random_branch(&cfg, (x, 0), pick).unwrap();
        prop_assert!(validate_path(&cfg, &p));
        for t in 0..=30 {
            let (a, b, c) = (l.at(t).unwrap(), p.at(t).unwrap(), r.at(t).unwrap());
            prop_assert!(a <= b && b <= c);
        }
    }

    #[test]
    fn particle_evolution_is_monotone(
        beta in 0.0f64..=1.0,
        seed in any::<u64>(),
        mask in prop::collection::vec(any::<bool>(), 11),
        sub in prop::collection::vec(any::<bool>(), 11),
    ) {
        let cfg = sample_config(Window::centered(40, 0, 15).unwrap(), beta, seed).unwrap();
        let all = full_slice(0, -10, 10).sites;
        let big: Vec<i64> = all.iter().zip(&mask).filter(|(_, &m)| m).map(|(&x, _)| x).collect();
        let small: Vec<i64> = big.iter().zip(&sub).filter(|(_, &m)| m).map(|(&x, _)| x).collect();
        let a = evolve(&cfg, &ParticleSet::new(0, small).unwrap(), 15).unwrap();
        let b = evolve(&cfg, &ParticleSet::new(0, big).unwrap(), 15).unwrap();
        for (sa, sb) in a.slices.iter().zip(&b.slices) {
            prop_assert!(sa.sites.iter().all(|x| sb.contains(*x)));
        }
    }

    #[test]
    fn sticky_clock_is_bounded_by_the_horizon(seed in any::<u64>(), l0 in -1.0f64..1.0, r0 in -1.0f64..1.0) {
        let noise = sample_noise(0.01, 1.0, seed).unwrap();
        let sol = solve_lr(&noise, l0, r0).unwrap();
        let s = sticky_time(&sol, noise.horizon()).unwrap();
        prop_assert!((0.0..=noise.horizon() + 1e-12).contains(&s));
        prop_assert_eq!(s, sticky_time_at_horizon(&noise, l0, r0).unwrap());
        if let Some(m) = sol.first_meeting {
            let k0 = (m / sol.step()).ceil() as usize;
            for k in k0..sol.l.len() {
                prop_assert!(sol.l[k] <= sol.r[k] + 1e-12);
            }
        }
    }
}

fn csv_without_wall_time(suite: Suite, replicas: usize) -> String {
    let ov = Overrides {
        replicas: Some(replicas),
        ..Overrides::default()
    };
    let r = run_suite(suite, 0, Budget::Quick, ov).unwrap();
    let mut buf = Vec::new();
    write_reports_csv(&mut buf, &r).unwrap();
    String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_are_reproducible_except_for_timing() {
    for (suite, n) in [
        (Suite::Structural, 8),
        (Suite::Density, 10),
        (Suite::Hitting, 50),
    ] {
        assert_eq!(
            csv_without_wall_time(suite, n),
            csv_without_wall_time(suite, n)
        );
    }
}
