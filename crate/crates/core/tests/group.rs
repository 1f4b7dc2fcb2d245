use heisenberg_qc::group::{dilate, frame, hderiv, Direction};
use heisenberg_qc::Point;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point> {
    (-10.0..10.0f64, -10.0..10.0f64, -100.0..100.0f64).prop_map(|(x, y, t)| Point::new(x, y, t))
}

fn close(a: Point, b: Point, tol: f64) -> bool {
    a.euclid_dist(b) <= tol * (1.0 + b.x.abs().max(b.y.abs()).max(b.t.abs()))
}

proptest! {
    #[test]
    fn product_is_associative(a in point(), b in point(), c in point()) {
        prop_assert!(close((a * b) * c, a * (b * c), 1e-12));
    }

    #[test]
    fn inverse_is_two_sided(a in point()) {
        prop_assert!(close(a * a.inv(), Point::ORIGIN, 1e-12));
        prop_assert!(close(a.inv() * a, Point::ORIGIN, 1e-12));
    }

    #[test]
    fn gauge_is_subadditive_and_symmetric(a in point(), b in point()) {
        prop_assert!((a * b).gauge() <= (a.gauge() + b.gauge()) * (1.0 + 1e-12));
        prop_assert!((a.inv().gauge() - a.gauge()).abs() <= 1e-12 * a.gauge());
    }

    #[test]
    fn distance_is_left_invariant(a in point(), b in point(), c in point()) {
        let d = a.dist(b);
        prop_assert!(((c * a).dist(c * b) - d).abs() <= 1e-10 * d.max(1e-300));
    }

    #[test]
    fn dilation_is_homogeneous_automorphism(a in point(), b in point(), log_r in -4.0..4.0f64) {
        let r = log_r.exp();
        let (da, db) = (dilate(r, a).unwrap(), dilate(r, b).unwrap());
        prop_assert!(close(da * db, dilate(r, a * b).unwrap(), 1e-12));
        prop_assert!((da.gauge() - r * a.gauge()).abs() <= 1e-12 * r * a.gauge().max(1e-300));
    }

    #[test]
    fn horizontal_derivatives_follow_the_frame(p in point()) {
        // X = d_x + 2y d_t, Y = d_y - 2x d_t on a linear function.
        let f = |q: Point| 3.0 * q.x - 2.0 * q.y + 0.5 * q.t;
        let fx = hderiv(f, p, Direction::X, 1e-4).unwrap();
        let fy = hderiv(f, p, Direction::Y, 1e-4).unwrap();
        prop_assert!((fx - (3.0 + p.y)).abs() <= 1e-6 * (1.0 + p.y.abs()));
        prop_assert!((fy - (-2.0 - p.x)).abs() <= 1e-6 * (1.0 + p.x.abs()));
    }
}

#[test]
fn dilation_rejects_nonpositive_factor() {
    assert!(dilate(0.0, Point::new(1.0, 0.0, 0.0)).is_err());
    assert!(dilate(-1.0, Point::new(1.0, 0.0, 0.0)).is_err());
}

#[test]
fn frame_is_left_translated_basis() {
    let p = Point::new(0.3, -0.7, 2.0);
    let [x, y, t] = frame(p);
    assert_eq!((x.a, x.b, x.c), (1.0, 0.0, 2.0 * p.y));
    assert_eq!((y.a, y.b, y.c), (0.0, 1.0, -2.0 * p.x));
    assert_eq!((t.a, t.b, t.c), (0.0, 0.0, 1.0));
}

#[test]
fn gauge_of_known_points() {
    assert_eq!(Point::new(1.0, 0.0, 0.0).gauge(), 1.0);
    assert!((Point::new(0.0, 0.0, 16.0).gauge() - 4.0).abs() < 1e-15);
    assert!((Point::new(1.0, 1.0, 4.0).gauge() - 20f64.powf(0.25)).abs() < 1e-14);
}
