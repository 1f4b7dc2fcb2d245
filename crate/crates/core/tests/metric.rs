use heisenberg_qc::flow::{ComposedMap, Letter};
use heisenberg_qc::metric::{cc_distance, david_semmes, length_d, omega_length, weighted_distance, DistanceOptions, WeightField};
use heisenberg_qc::quadrature::{quasi_random_ball, UNIT_BALL_VOLUME};
use heisenberg_qc::{Point, QuadratureConfig};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Closed-form CC distance: geodesics project to circular arcs; an arc of
/// angle `th` over chord `r` has length `r (th/2) / sin(th/2)` and lifts to
/// height `r^2 (th - sin th) / (2 sin^2(th/2))`.
fn cc_exact(p: Point, q: Point) -> f64 {
    let d = p.inv() * q;
    let r = d.x.hypot(d.y);
    let t = d.t.abs();
    if t == 0.0 {
        return r;
    }
    if r == 0.0 {
        return (PI * t).sqrt();
    }
    let height = |th: f64| r * r * (th - th.sin()) / (2.0 * (th / 2.0).sin().powi(2));
    let (mut lo, mut hi) = (0.0, 2.0 * PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if height(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let th = 0.5 * (lo + hi);
    r * (th / 2.0) / (th / 2.0).sin()
}

#[test]
fn oracle_matches_known_values() {
    assert!((cc_exact(Point::ORIGIN, Point::new(0.0, 0.0, 1.0)) - PI.sqrt()).abs() < 1e-12);
    assert!((cc_exact(Point::ORIGIN, Point::new(0.3, 0.4, 0.0)) - 0.5).abs() < 1e-12);
}

#[test]
fn cc_distance_agrees_with_closed_form() {
    let pts = quasi_random_ball(Point::ORIGIN, 2.0, 24, &[], 0.0);
    let opts = DistanceOptions::default();
    let t0 = std::time::Instant::now();
    let mut worst: f64 = 0.0;
    for w in pts.chunks(2) {
        let exact = cc_exact(w[0], w[1]);
        let got = cc_distance(w[0], w[1], &opts).unwrap().value;
        assert!(got >= exact * (1.0 - 1e-9), "optimizer beat the geodesic: {got} < {exact}");
        worst = worst.max(got / exact - 1.0);
    }
    eprintln!("worst relative excess {worst:e} in {:?}", t0.elapsed());
    assert!(worst < 0.02);
}

#[test]
fn jacobian_weight_of_a_dilation_scales_distance() {
    // J of delta_2 is 16, so rho_omega = 2 rho.
    let f = ComposedMap::new(vec![Letter::Dilation(2.0)]);
    let omega = WeightField::from_map_exact(f);
    let opts = DistanceOptions { vertices: 32, restarts: 2, ..DistanceOptions::default() };
    let (p, q) = (Point::new(0.1, 0.2, 0.0), Point::new(-0.4, 0.5, 0.6));
    let plain = cc_distance(p, q, &opts).unwrap();
    let weighted = weighted_distance(p, q, &omega, &opts).unwrap();
    assert!((weighted.value / plain.value - 2.0).abs() < 1e-9, "{} vs {}", weighted.value, plain.value);
    let again = omega_length(&plain.curve, &WeightField::constant(81.0), opts.quadrature_nodes);
    assert!((again / plain.value - 3.0).abs() < 1e-9);
}

#[test]
fn vertical_segment_length_grows_like_sqrt_m() {
    let l = length_d(|s| Point::new(0.0, 0.0, s), 0.0, 1.0, &[1, 4, 16, 64]);
    for (m, v) in [1.0f64, 4.0, 16.0, 64.0].iter().zip(&l) {
        assert!((v - m.sqrt()).abs() < 1e-12);
    }
}

fn point() -> impl Strategy<Value = Point> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, t)| Point::new(x, y, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn david_semmes_of_unit_weight_is_comparable_to_d(p in point(), q in point(), a in point()) {
        prop_assume!(p.dist(q) > 1e-3);
        let cfg = QuadratureConfig { mc_samples: 2000, ..QuadratureConfig::default() };
        let one = WeightField::constant(1.0);
        let d = p.dist(q);
        let ds = david_semmes(p, q, &one, &cfg).unwrap();
        let lo = UNIT_BALL_VOLUME.powf(0.25) * d;
        prop_assert!(ds >= lo * (1.0 - 1e-12) && ds <= 2f64.powf(0.25) * lo * (1.0 + 1e-12));
        let moved = david_semmes(a * p, a * q, &one, &cfg).unwrap();
        prop_assert!((moved / ds - 1.0).abs() <= 1e-9);
    }
}
