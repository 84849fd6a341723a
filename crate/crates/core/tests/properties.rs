use std::f64::consts::PI;

use itc_core::asymptotics::DUAL_SLACK;
use itc_core::geometry::DEFAULT_QUADRUPLE_BUDGET;
use itc_core::*;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn semi_value(i: i64, j: i64) -> f64 {
    if i == j {
        return 1.0;
    }
    semi_infinite_pmax_closed(&reduce_pair(i, j, Frame::SemiInfinite).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_pure(n in 1usize..40, z in 0.0f64..1e4) {
        let n = 2 * n + 1;
        let spec = ChainSpec::biased(n, z).unwrap();
        prop_assert_eq!(build_hamiltonian(&spec), build_hamiltonian(&spec));
    }

    #[test]
    fn numeric_agrees_with_analytic(n in 2usize..60) {
        let spec = ChainSpec::homogeneous(n).unwrap();
        let a = analytic_spectrum(&spec).unwrap();
        let b = numeric_spectrum(&build_hamiltonian(&spec)).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
        prop_assert!(a.projector_deviation(&b).unwrap() <= 1e-8);
    }

    #[test]
    fn itc_matrix_invariants(half in 1usize..15, z in prop_oneof![Just(0.0), 0.0f64..50.0]) {
        let spec = ChainSpec::biased(2 * half + 1, z).unwrap();
        let m = itc_matrix(&spec).unwrap();
        let n = m.n();
        for i in 1..=n {
            prop_assert!((m.pmax(i, i) - 1.0).abs() < 1e-12);
            for j in 1..=n {
                prop_assert_eq!(m.pmax(i, j), m.pmax(j, i));
                prop_assert!(m.pmax(i, j) >= 0.0 && m.pmax(i, j) <= 1.0 + 1e-12);
                // a center bias keeps the mirror symmetry of the chain
                prop_assert!((m.pmax(i, j) - m.pmax(n + 1 - i, n + 1 - j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn semi_infinite_dual_representation(i in 1i64..60, j in 1i64..60) {
        prop_assume!(i != j);
        let p = reduce_pair(i, j, Frame::SemiInfinite).unwrap();
        let s = semi_infinite_pmax_series(&p, TOL).unwrap();
        let c = semi_infinite_pmax_closed(&p).unwrap();
        prop_assert!(s.tail_bound < TOL);
        prop_assert!((s.value - c).abs() <= TOL + DUAL_SLACK);
        prop_assert!(c >= 8.0 / (PI * PI) - TOL);
        prop_assert!(c < 1.0);
    }

    #[test]
    fn semi_infinite_gcd_invariance(i in 1i64..40, j in 1i64..40, c in 1i64..12) {
        prop_assume!(i != j);
        prop_assert_eq!(semi_value(i, j), semi_value(c * i, c * j));
    }

    #[test]
    fn doubly_infinite_odd_scaling(i in -30i64..30, j in -30i64..30, c in 0i64..6) {
        prop_assume!(i != 0 && j != 0);
        let c = 2 * c + 1;
        let a = doubly_infinite_pmax(i, j, TOL).unwrap().value;
        let b = doubly_infinite_pmax(c * i, c * j, TOL).unwrap().value;
        prop_assert_eq!(a, b);
        prop_assert!(a >= 8.0 / (PI * PI) - 1e-9);
    }

    #[test]
    fn four_point_scale_covariance(half in 2usize..8, c in 0.1f64..10.0) {
        let m = itc_matrix(&ChainSpec::homogeneous(2 * half + 1).unwrap()).unwrap();
        let base = four_point_delta(m.premetric(), DEFAULT_QUADRUPLE_BUDGET, 0);
        let scaled = four_point_delta(&m.premetric().scaled(c), DEFAULT_QUADRUPLE_BUDGET, 0);
        prop_assert!((scaled.delta - c * base.delta).abs() <= 1e-12 * (1.0 + scaled.delta));
    }
}

#[test]
fn finite_chains_converge_to_semi_infinite_limit() {
    for (i, j) in [(1usize, 2usize), (2, 3), (3, 5), (1, 3)] {
        let limit = semi_value(i as i64, j as i64);
        let errs: Vec<f64> = [101, 401, 1601]
            .iter()
            .map(|&n| (p_max_explicit(n, i, j).unwrap().sqrt() - limit).abs())
            .collect();
        assert!(
            errs[1] < errs[0] && errs[2] < errs[1],
            "({i},{j}): {errs:?}"
        );
        assert!(errs[2] <= 0.01);
    }
}

#[test]
fn ripples_follow_common_factors() {
    let v = |j| semi_value(6, j);
    for shared in [12, 18, 24] {
        for coprime in [11, 13, 17, 19] {
            assert!(v(shared) > v(coprime), "j={shared} vs j={coprime}");
        }
    }
}

#[test]
fn center_value_sits_below_the_floor() {
    let c = diameter_constants();
    assert!(c.center_sqrt < c.doubly_floor_sqrt);
    for j in 1..=40 {
        assert_eq!(
            doubly_infinite_pmax(0, j, TOL).unwrap().value,
            c.center_sqrt
        );
        assert_eq!(
            doubly_infinite_pmax(-j, 0, TOL).unwrap().value,
            c.center_sqrt
        );
    }
}

#[test]
fn unitarity_and_capacity_bound_on_a_time_grid() {
    for n in [6, 13] {
        let dec = spectrum(&ChainSpec::homogeneous(n).unwrap()).unwrap();
        for step in 0..=2000 {
            let t = step as f64 * 0.05;
            for i in 1..=n {
                assert!((row_sum_check(&dec, i, t).unwrap() - 1.0).abs() <= 1e-10);
                for j in 1..=n {
                    assert!(p_t(&dec, i, j, t).unwrap() <= p_max(&dec, i, j).unwrap() + 1e-10);
                }
            }
        }
    }
}

#[test]
fn anticore_on_reference_lengths() {
    for n in [21, 51, 201] {
        let m = itc_matrix(&ChainSpec::homogeneous(n).unwrap()).unwrap();
        let a = find_anticore(&m).unwrap();
        assert!(a.holds, "N={n}: {:?}", a.violations);
        let profile = inertia_profile(&m, 2.0);
        let argmax = (1..=n)
            .max_by(|&a, &b| profile[a - 1].total_cmp(&profile[b - 1]))
            .unwrap();
        assert_eq!(argmax, a.omega);
    }
}

#[test]
fn diameter_of_two_hundred_one_spins() {
    let m = itc_matrix(&ChainSpec::homogeneous(201).unwrap()).unwrap();
    let d = diameter(m.premetric());
    assert!(d.pair.0 == 101 || d.pair.1 == 101, "{:?}", d.pair);
    let value = d.value.finite().unwrap();
    assert!((value - (-2.0 * 0.63f64.ln())).abs() <= 0.05);
}

#[test]
fn large_biased_chain_proxy() {
    let dec = spectrum(&ChainSpec::biased(501, 1e3).unwrap()).unwrap();
    assert!(p_max(&dec, 1, 251).unwrap() < 1e-3);
}
