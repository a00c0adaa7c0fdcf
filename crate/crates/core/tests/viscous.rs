mod common;

use std::sync::OnceLock;

use burgers_source::par;
use burgers_source::specfun::besseli0_scaled;
use burgers_source::verify::TestFunction;
use burgers_source::viscous::residual::initial_term;
use burgers_source::viscous::*;
use burgers_source::quadrature::GaussLegendre;
use burgers_source::{InitialData, QuadratureSpec, Viscosity};
use proptest::prelude::*;

use common::fixture_data;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn eps(e: f64) -> Viscosity {
    Viscosity::new(e).unwrap()
}

fn theta(d: &InitialData, tr: &BoundaryTrace, x: f64, t: f64) -> f64 {
    heat(d, tr, x, t, &q()).unwrap().log_mag.exp()
}

// Crank-Nicolson on the full line with the Heaviside damping, nx = 16001 on [-16, 16],
// Richardson-extrapolated in time; accurate to about 1e-9.
#[test]
fn matches_crank_nicolson_reference() {
    let cases = [
        (InitialData::riemann(-1.0, 1.0).unwrap(), [0.2387176901, 0.3983619410, 0.0815842251]),
        (InitialData::zero(), [0.4733086376, 0.8393562677, 0.2047137693]),
    ];
    for (d, want) in cases {
        let tr = BoundaryTrace::new(&d, eps(0.5), 2.0, &q()).unwrap();
        for ((x, t), w) in [(0.5, 1.0), (-0.5, 1.0), (1.0, 2.0)].into_iter().zip(want) {
            let got = theta(&d, &tr, x, t);
            assert!((got - w).abs() < 1e-8, "({x}, {t}): {got} vs {w}");
        }
    }
}

/// I0(z) e^{-z} by its power series, for the zero-data trace.
fn i0e_series(z: f64) -> f64 {
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 1..400 {
        term *= (z / 2.0) * (z / 2.0) / (k * k) as f64;
        sum += term;
    }
    sum * (-z).exp()
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + h * k as f64)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// Half-line Dirichlet solution of theta_t = eps theta_xx - c theta with theta0 = 1 and
/// boundary value g, by direct trapezoid sums with 1e6 nodes.
fn half_line_oracle(x: f64, t: f64, e: f64, damping: f64, g: impl Fn(f64) -> f64) -> f64 {
    let a = x.abs();
    let s4 = 4.0 * e * t;
    let initial = trapezoid(
        |xi| ((-(a - xi).powi(2) / s4).exp() - (-(a + xi).powi(2) / s4).exp()) / (s4 * std::f64::consts::PI).sqrt(),
        0.0,
        a + 40.0 * (e * t).sqrt(),
        1_000_000,
    ) * (-damping * t).exp();
    // s = t - tau; the kernel vanishes to all orders at s = 0
    let boundary = trapezoid(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            a / (2.0 * (std::f64::consts::PI * e).sqrt() * s.powf(1.5)) * (-a * a / (4.0 * e * s) - damping * s).exp() * g(t - s)
        },
        0.0,
        t,
        1_000_000,
    );
    initial + boundary
}

#[test]
fn zero_data_right_field_matches_trapezoid_oracle() {
    let e = 1.0;
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(e), 1.0, &q()).unwrap();
    let g = |t: f64| i0e_series(t / (4.0 * e));
    let want = half_line_oracle(1.0, 1.0, e, 1.0 / (2.0 * e), g);
    let got = theta(&d, &tr, 1.0, 1.0);
    assert!((got / want - 1.0).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn zero_data_left_field_matches_trapezoid_oracle() {
    let e = 1.0;
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(e), 1.0, &q()).unwrap();
    let g = |t: f64| i0e_series(t / (4.0 * e));
    let want = half_line_oracle(-1.0, 1.0, e, 0.0, g);
    let got = theta(&d, &tr, -1.0, 1.0);
    assert!((got / want - 1.0).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn zero_data_trace_is_scaled_bessel() {
    let e = 0.5;
    let tr = BoundaryTrace::new(&InitialData::zero(), eps(e), 3.0, &q()).unwrap();
    assert_eq!(boundary_g(&tr, 0.0).unwrap(), 1.0);
    for t in [0.1, 0.7, 1.3, 3.0] {
        let g = boundary_g(&tr, t).unwrap();
        assert!((g - besseli0_scaled(t / (4.0 * e))).abs() < 1e-12);
        assert!((g - i0e_series(t / (4.0 * e))).abs() < 1e-12);
        assert_eq!(source_kernel_f(&InitialData::zero(), eps(e), t, &q()).unwrap(), 0.0);
    }
    // t / 4 eps = 50
    let tr = BoundaryTrace::new(&InitialData::zero(), eps(0.01), 2.0, &q()).unwrap();
    let g = boundary_g(&tr, 2.0).unwrap();
    assert!((g - 1.0 / (100.0 * std::f64::consts::PI).sqrt()).abs() < 1e-3);
}

#[test]
fn far_left_field_forgets_the_source() {
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(1.0), 1.0, &q()).unwrap();
    assert!((theta(&d, &tr, -20.0, 1.0) - 1.0).abs() <= 1e-6);
}

#[test]
fn both_sides_meet_the_trace_at_the_axis() {
    let e = eps(0.5);
    for (name, d) in fixture_data() {
        let tr = BoundaryTrace::new(&d, e, 2.0, &q()).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let g = boundary_g(&tr, t).unwrap();
            let r = theta(&d, &tr, 1e-6, t);
            let l = theta(&d, &tr, -1e-6, t);
            assert!((r - g).abs() <= 1e-4 && (l - g).abs() <= 1e-4, "{name} t={t}: {r} {l} {g}");
        }
    }
}

#[test]
fn fluxes_match_across_the_axis() {
    let e = eps(0.5);
    let h = 1e-4;
    for (name, d) in fixture_data() {
        let tr = BoundaryTrace::new(&d, e, 2.0, &q()).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let g = boundary_g(&tr, t).unwrap();
            let rx = (theta(&d, &tr, h, t) - g) / h;
            let lx = (g - theta(&d, &tr, -h, t)) / h;
            assert!((rx - lx).abs() / g <= 1e-3, "{name} t={t}: {rx} vs {lx}");
        }
    }
}

#[test]
fn velocity_examples() {
    let e = eps(0.5);
    let one = InitialData::constant(1.0).unwrap();
    let tr = BoundaryTrace::new(&one, e, 0.5, &q()).unwrap();
    assert!((velocity(&one, &tr, 20.0, 0.5, &q()).unwrap() - 1.0).abs() <= 1e-3);

    let z = InitialData::zero();
    let tr = BoundaryTrace::new(&z, e, 1.0, &q()).unwrap();
    for k in 1..10 {
        assert!(velocity(&z, &tr, 0.1 * k as f64, 1.0, &q()).unwrap() > 0.0);
    }
}

#[test]
fn velocity_is_the_log_derivative() {
    let h = 1e-4;
    for (name, d) in fixture_data() {
        let e = eps(0.5);
        let tr = BoundaryTrace::new(&d, e, 2.0, &q()).unwrap();
        for (x, t) in [(0.7, 1.0), (-0.7, 1.0), (2.0, 2.0), (-1.5, 0.5)] {
            let u = velocity(&d, &tr, x, t, &q()).unwrap();
            let lp = heat(&d, &tr, x + h, t, &q()).unwrap().log_mag;
            let lm = heat(&d, &tr, x - h, t, &q()).unwrap().log_mag;
            let fd = -2.0 * e.get() * (lp - lm) / (2.0 * h);
            assert!((u - fd).abs() <= 1e-4, "{name} ({x}, {t}): {u} vs {fd}");
        }
    }
}

#[test]
fn split_terms_recombine_for_zero_data() {
    let e = eps(0.5);
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, e, 1.0, &q()).unwrap();
    let sp = split_terms_right(&d, e, 1.0, 1.0, &q()).unwrap();
    let rec = sp.recombine(e, 1.0).to_f64();
    assert!((rec / theta(&d, &tr, 1.0, 1.0) - 1.0).abs() <= 1e-4);
    assert!(sp.initial_combination().to_f64() >= 0.0);
    let sp = split_terms_left(&d, e, -1.0, 1.0, &q()).unwrap();
    assert!((sp.recombine(e, 1.0).to_f64() / theta(&d, &tr, -1.0, 1.0) - 1.0).abs() <= 1e-4);
}

fn fine() -> QuadratureSpec {
    // trace spacing below the stencil step
    QuadratureSpec { time_nodes: 2000, ..q() }
}

#[test]
fn pde_residual_small_on_both_sides() {
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(1.0), 2.0, &fine()).unwrap();
    for x in [1.0, -1.0] {
        let r = pde_residual_theta(&d, &tr, x, 1.0, 1e-3, 1e-3, &fine()).unwrap();
        assert!(r.abs() <= 1e-4, "x={x}: {r}");
    }
}

#[test]
fn pde_residual_is_second_order() {
    let d = InitialData::riemann(-1.0, 1.0).unwrap();
    let tr = BoundaryTrace::new(&d, eps(0.25), 2.0, &fine()).unwrap();
    for x in [0.5, -0.5] {
        let big = pde_residual_theta(&d, &tr, x, 1.0, 0.08, 0.08, &fine()).unwrap();
        let small = pde_residual_theta(&d, &tr, x, 1.0, 0.04, 0.04, &fine()).unwrap();
        let ratio = big / small;
        assert!((3.0..=5.0).contains(&ratio), "x={x}: {big} / {small} = {ratio}");
    }
}

#[test]
fn pde_residual_rejects_bad_stencils() {
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(1.0), 2.0, &q()).unwrap();
    assert!(pde_residual_theta(&d, &tr, 0.0, 1.0, 1e-3, 1e-3, &q()).is_err());
    assert!(pde_residual_theta(&d, &tr, 0.5, 1.0, 0.6, 1e-3, &q()).is_err());
    assert!(pde_residual_theta(&d, &tr, 0.5, 1.0, 1e-3, 1.5, &q()).is_err());
}

#[test]
fn weak_residual_for_zero_data_and_linearity() {
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(1.0), 1.5, &q()).unwrap();
    let phi = TestFunction::new(-2.0, 2.0, 0.2, 1.5, 1.0).unwrap();
    let r = viscous_weak_residual(&d, &tr, &phi, &q(), WeakGrid::default()).unwrap();
    assert!(r.abs() <= 5e-3, "{r}");
    let r3 = viscous_weak_residual(&d, &tr, &phi.scaled(3.0), &q(), WeakGrid::default()).unwrap();
    assert!((r3 - 3.0 * r).abs() <= 1e-10);
}

#[test]
fn source_and_initial_terms_vanish_off_support() {
    let d = InitialData::rectangle(-1.0, 1.0, 3.0, 0.0).unwrap();
    let phi = TestFunction::new(1.2, 3.0, 0.1, 1.0, 1.0).unwrap();
    let gl = GaussLegendre::new(12);
    assert_eq!(initial_term(&d, &phi, &gl, 4), 0.0);
    assert_eq!(gl.integrate(0.1, 1.0, |t| phi.value(0.0, t)), 0.0);
}

#[test]
fn weak_residual_needs_the_trace_to_cover_the_support() {
    let d = InitialData::zero();
    let tr = BoundaryTrace::new(&d, eps(1.0), 1.0, &q()).unwrap();
    let phi = TestFunction::new(-1.0, 1.0, 0.2, 1.5, 1.0).unwrap();
    assert!(matches!(
        viscous_weak_residual(&d, &tr, &phi, &q(), WeakGrid::default()),
        Err(ViscousError::OutOfRange { .. })
    ));
}

#[test]
fn evaluation_is_bit_reproducible() {
    let d = InitialData::rectangle(-1.0, 1.0, 3.0, 0.0).unwrap();
    let a = BoundaryTrace::new(&d, eps(0.3), 2.0, &q()).unwrap();
    let b = BoundaryTrace::new(&d, eps(0.3), 2.0, &q()).unwrap();
    assert_eq!(a.g_values(), b.g_values());
    assert_eq!(a.f_values(), b.f_values());
    let pts: Vec<(f64, f64)> = (0..24).map(|k| (-3.0 + 0.25 * k as f64 + 0.1, 0.2 + 0.07 * k as f64)).collect();
    let eval = |p: &(f64, f64)| field_point(&d, &a, p.0, p.1, &q()).map(|f| (f.theta.log_mag.to_bits(), f.u.to_bits()));
    let par_run: Vec<_> = par::map(&pts, eval);
    let seq_run: Vec<_> = par::map_seq(&pts, eval);
    assert_eq!(par_run, seq_run);
}

fn traces() -> &'static Vec<(InitialData, [BoundaryTrace; 2])> {
    static T: OnceLock<Vec<(InitialData, [BoundaryTrace; 2])>> = OnceLock::new();
    T.get_or_init(|| {
        fixture_data()
            .into_iter()
            .map(|(_, d)| {
                let tr = [0.05, 0.5].map(|e| BoundaryTrace::new(&d, eps(e), 5.0, &q()).unwrap());
                (d, tr)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_is_positive(k in 0usize..6, which in 0usize..2, x in -5.0f64..5.0, t in 0.1f64..5.0) {
        prop_assume!(x != 0.0);
        let (d, tr) = &traces()[k];
        let h = heat(d, &tr[which], x, t, &q()).unwrap();
        prop_assert_eq!(h.sign, 1.0);
        prop_assert!(h.log_mag.is_finite());
    }
}
