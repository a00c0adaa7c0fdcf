mod common;

use burgers_source::variational::*;
use burgers_source::InitialData;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::fixture_data;

fn s() -> SearchSpec {
    SearchSpec::default()
}

fn datum() -> impl Strategy<Value = InitialData> {
    (1usize..4)
        .prop_flat_map(|n| (prop::collection::vec(-3.0f64..3.0, n), prop::collection::vec(-2.0f64..2.0, n + 1)))
        .prop_filter_map("distinct breakpoints", |(mut b, v)| {
            b.sort_by(f64::total_cmp);
            if b.windows(2).any(|w| w[1] - w[0] < 1e-3) {
                return None;
            }
            InitialData::new(b, v).ok()
        })
}

#[test]
fn finite_difference_examples() {
    let z = InitialData::zero();
    let r2 = 2f64.sqrt();
    match finite_diff_check_U(Side::Right, &z, 1.0, 2.0, 1e-4, &s()).unwrap() {
        FiniteDiff::Value(v) => assert!((v - r2).abs() < 1e-3),
        FiniteDiff::Skipped => panic!("skipped at (1, 2)"),
    }
    match finite_diff_check_U(Side::Right, &z, 2.0, 1.0, 1e-4, &s()).unwrap() {
        FiniteDiff::Value(v) => assert!(v.abs() < 1e-3),
        FiniteDiff::Skipped => panic!("skipped at (2, 1)"),
    }
    let x1 = interfaces(Side::Right, &z, 1.0, &s()).unwrap().outer;
    for x in [x1 - 1e-3, x1 + 1e-3] {
        assert_eq!(finite_diff_check_U(Side::Right, &z, x, 1.0, 1e-4, &s()).unwrap(), FiniteDiff::Skipped);
    }
}

#[test]
fn zero_data_left_field_is_at_rest() {
    let z = InitialData::zero();
    for t in [0.5, 1.0, 3.0] {
        for x in [-0.01, -0.5, -2.0, -7.0] {
            assert_eq!(limit_velocity(Side::Left, &z, x, t, &s()).unwrap(), 0.0, "({x}, {t})");
        }
    }
    // analytically y1 = 0; the tie tolerance moves the detected switch by O(tie_tol / u)
    let y = interfaces(Side::Left, &z, 2.0, &s()).unwrap();
    assert!(y.outer <= 0.0 && y.outer > -1e-4, "{y:?}");
}

#[test]
fn fixture_interfaces_regression() {
    let cases: [(usize, f64, f64, f64); 4] = [
        // (datum, t, x1 / t, tolerance)
        (0, 1.0, 1.0 / 2f64.sqrt(), 1e-6),
        (1, 1.0, (1.0 + 3f64.sqrt()) / 2.0, 1e-6),
        (2, 1.0, (2f64.sqrt() - 1.0) / 2.0, 1e-6),
        (3, 2.0, (1.0 + 2f64.sqrt()) / 2.0, 1e-6),
    ];
    let data = fixture_data();
    for (k, t, speed, tol) in cases {
        let x1 = interfaces(Side::Right, &data[k].1, t, &s()).unwrap().outer;
        assert!((x1 - speed * t).abs() < tol, "{}: {x1} vs {}", data[k].0, speed * t);
    }
}

#[test]
fn certificates_hold_on_fixtures() {
    let search = SearchSpec { probes: 512, ..s() };
    for (name, d) in fixture_data() {
        for (x, t) in [(0.4, 1.0), (1.7, 2.0), (-0.6, 1.0), (-2.5, 1.5)] {
            let side = Side::of(x).unwrap();
            for b in Branch::all(side) {
                let r = minimize_branch(b, &d, x, t, &search).unwrap();
                let c = certify(&r, &d, x, t, &search).unwrap();
                assert_eq!(c.violations, 0, "{name} {} ({x}, {t}): {c:?}", b.label());
            }
        }
    }
}

#[test]
fn difference_quotient_matches_velocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, d) in fixture_data() {
        let mut compared = 0;
        for _ in 0..50 {
            let t = rng.gen_range(0.3..2.5);
            let x = rng.gen_range(0.05..4.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let side = Side::of(x).unwrap();
            let Ok(u) = limit_velocity(side, &d, x, t, &s()) else { continue };
            if let FiniteDiff::Value(v) = finite_diff_check_U(side, &d, x, t, 1e-4, &s()).unwrap() {
                assert!((v - u).abs() < 1e-3, "{name} ({x}, {t}): {v} vs {u}");
                compared += 1;
            }
        }
        assert!(compared >= 40, "{name}: only {compared} of 50 compared");
    }
}

#[test]
fn limit_is_lipschitz() {
    for (name, d) in fixture_data() {
        let m = d.bound();
        // every characteristic speed is bounded by sqrt(2 + M^2)
        let bound = (2.0 + m * m).sqrt();
        for t in [0.5, 2.0] {
            let xs: Vec<f64> = (1..=120).map(|k| 0.05 * k as f64).collect();
            for side in [Side::Left, Side::Right] {
                let sgn = if side == Side::Right { 1.0 } else { -1.0 };
                let u: Vec<f64> = xs.iter().map(|&x| limit_U(side, &d, sgn * x, t, &s()).unwrap().value).collect();
                let c = u.windows(2).map(|w| (w[1] - w[0]).abs() / 0.05).fold(0.0, f64::max);
                assert!(c <= bound * (1.0 + 1e-9) + 1e-9, "{name} t={t} {side:?}: C = {c} > {bound}");
            }
        }
    }
}

#[test]
fn wrong_half_line_is_rejected() {
    let z = InitialData::zero();
    assert!(limit_U(Side::Right, &z, -1.0, 1.0, &s()).is_err());
    assert!(limit_U(Side::Left, &z, 0.0, 1.0, &s()).is_err());
    assert!(minimize_branch(Branch::new(Side::Left, 2).unwrap(), &z, 1.0, 1.0, &s()).is_err());
    assert!(finite_diff_check_U(Side::Right, &z, 0.5, 1.0, 0.6, &s()).is_err());
    assert!(interfaces(Side::Right, &z, 0.0, &s()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zero_data_branches_one_and_two_collapse(x in 0.01f64..4.0, t in 0.1f64..3.0, left in any::<bool>()) {
        let z = InitialData::zero();
        let (side, x) = if left { (Side::Left, -x) } else { (Side::Right, x) };
        let a = minimize_branch(Branch::new(side, 1).unwrap(), &z, x, t, &s()).unwrap();
        let b = minimize_branch(Branch::new(side, 2).unwrap(), &z, x, t, &s()).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-9, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn interfaces_are_ordered(d in datum(), t in 0.2f64..3.0) {
        let r = interfaces(Side::Right, &d, t, &s()).unwrap();
        prop_assert!(0.0 <= r.inner && r.inner <= r.outer, "{r:?}");
        let l = interfaces(Side::Left, &d, t, &s()).unwrap();
        prop_assert!(l.outer <= l.inner && l.inner <= 0.0, "{l:?}");
    }

    #[test]
    fn argmins_move_monotonically(d in datum(), t in 0.3f64..2.5, left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        let sgn = if left { -1.0 } else { 1.0 };
        let reach = 2.0 * (1.0 + d.bound()) * t + 1.0 + d.support_radius();
        let sols: Vec<LimitSolution> = (1..=30)
            .map(|k| limit_U(side, &d, sgn * reach * k as f64 / 30.0, t, &s()).unwrap())
            .collect();
        let free: Vec<&LimitSolution> = sols.iter().filter(|p| !p.tie).collect();
        for w in free.windows(2) {
            let (a, b) = (w[0].active_result(), w[1].active_result());
            prop_assert!(b.argmin.tau <= a.argmin.tau + 1e-6, "tau at x = {}", w[1].x);
            if a.branch == b.branch {
                if a.branch.index() == 3 {
                    prop_assert!(b.argmin.xi >= a.argmin.xi - 1e-6, "xi at x = {}", w[1].x);
                } else {
                    prop_assert!(b.argmin.xi <= a.argmin.xi + 1e-6, "xi at x = {}", w[1].x);
                }
            }
        }
        if side == Side::Right {
            let mut seq: Vec<u8> = sols.iter().map(|p| p.active.index()).collect();
            seq.dedup();
            let order = [2u8, 1, 3];
            let positions: Vec<usize> = seq.iter().map(|b| order.iter().position(|o| o == b).unwrap()).collect();
            prop_assert!(positions.windows(2).all(|w| w[0] < w[1]), "branch order {seq:?}");
        }
    }
}
