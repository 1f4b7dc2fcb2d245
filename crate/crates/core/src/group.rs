//! Heisenberg group arithmetic, the Korányi gauge and the left-invariant frame.
//!
//! Points are `(x, y, t)` with product
//! `(x1, y1, t1) * (x2, y2, t2) = (x1 + x2, y1 + y2, t1 + t2 + 2(x2 y1 - x1 y2))`.
//! The frame `X = dx + 2y dt`, `Y = dy - 2x dt`, `T = dt` satisfies `[X, Y] = -4T`.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0, t: 0.0 };

    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        Point { x, y, t }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Point::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.t]
    }

    pub fn inv(self) -> Point {
        Point::new(-self.x, -self.y, -self.t)
    }

    /// `((x^2 + y^2)^2 + t^2)^(1/4)`, evaluated without intermediate overflow.
    pub fn gauge(self) -> f64 {
        let r = self.x.hypot(self.y);
        let st = self.t.abs().sqrt();
        if r == 0.0 && st == 0.0 {
            0.0
        } else if r >= st {
            let q = (self.t / r) / r;
            r * (1.0 + q * q).sqrt().sqrt()
        } else {
            let q = r * (r / self.t.abs());
            st * (1.0 + q * q).sqrt().sqrt()
        }
    }

    /// Fourth power of the gauge; a polynomial in the coordinates.
    pub fn gauge4(self) -> f64 {
        let r2 = self.x * self.x + self.y * self.y;
        r2 * r2 + self.t * self.t
    }

    pub fn checked_gauge(self) -> Result<f64> {
        let g = self.gauge();
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::GaugeOverflow(self.x, self.y, self.t))
        }
    }

    /// Korányi distance `||q^{-1} p||`.
    pub fn dist(self, q: Point) -> f64 {
        (q.inv() * self).gauge()
    }

    /// Non-isotropic dilation without the positivity check.
    pub fn scaled(self, r: f64) -> Point {
        Point::new(r * self.x, r * self.y, r * r * self.t)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.t.is_finite()
    }

    pub fn euclid_dist(self, q: Point) -> f64 {
        let d = [self.x - q.x, self.y - q.y, self.t - q.t];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

impl Mul for Point {
    type Output = Point;

    fn mul(self, q: Point) -> Point {
        Point::new(
            self.x + q.x,
            self.y + q.y,
            self.t + q.t + 2.0 * (q.x * self.y - self.x * q.y),
        )
    }
}

/// `delta_r(x, y, t) = (r x, r y, r^2 t)`.
pub fn dilate(r: f64, p: Point) -> Result<Point> {
    if r > 0.0 && r.is_finite() {
        Ok(p.scaled(r))
    } else {
        Err(Error::NonPositiveDilation(r))
    }
}

/// Tangent vector in Cartesian components attached to a base point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tangent {
    pub base: Point,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
    T,
}

impl Direction {
    /// Unit step `exp(h W)` of the left-invariant field `W`.
    pub fn step(self, h: f64) -> Point {
        match self {
            Direction::X => Point::new(h, 0.0, 0.0),
            Direction::Y => Point::new(0.0, h, 0.0),
            Direction::T => Point::new(0.0, 0.0, h),
        }
    }
}

/// Cartesian components of `X`, `Y`, `T` at `p`.
pub fn frame(p: Point) -> [Tangent; 3] {
    [
        Tangent { base: p, a: 1.0, b: 0.0, c: 2.0 * p.y },
        Tangent { base: p, a: 0.0, b: 1.0, c: -2.0 * p.x },
        Tangent { base: p, a: 0.0, b: 0.0, c: 1.0 },
    ]
}

/// Derivative of `f` along a left-invariant field by central differences
/// along group translates, `(f(p*exp(hW)) - f(p*exp(-hW))) / 2h`.
///
/// When the two samples agree to within a few ulps relative to their size the
/// difference is dominated by rounding; a Richardson-extrapolated estimate
/// at the larger step `1e-3` is returned instead.
pub fn hderiv<F: Fn(Point) -> f64>(f: F, p: Point, dir: Direction, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("finite-difference step must be positive, got {h}")));
    }
    let fp = f(p * dir.step(h));
    let fm = f(p * dir.step(-h));
    if !(fp.is_finite() && fm.is_finite()) {
        return Err(Error::NonFinite(vec![p]));
    }
    let scale = fp.abs().max(fm.abs());
    let diff = fp - fm;
    if diff != 0.0 && diff.abs() < 64.0 * f64::EPSILON * scale {
        let big = 1e-3;
        let d1 = central(&f, p, dir, big);
        let d2 = central(&f, p, dir, big / 2.0);
        return Ok((4.0 * d2 - d1) / 3.0);
    }
    Ok(diff / (2.0 * h))
}

fn central<F: Fn(Point) -> f64>(f: &F, p: Point, dir: Direction, h: f64) -> f64 {
    (f(p * dir.step(h)) - f(p * dir.step(-h))) / (2.0 * h)
}

/// Shared numerical settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rng_seed: u64,
    pub mc_samples: usize,
    pub grid_resolution: usize,
    pub fd_step: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rng_seed: 0x5eed, mc_samples: 200_000, grid_resolution: 16, fd_step: 1e-4 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be positive".into()));
        }
        if self.grid_resolution < 2 {
            return Err(Error::Config("grid_resolution must be at least 2".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(Error::Config(format!("fd_step must lie in (0, 1), got {}", self.fd_step)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt() -> impl Strategy<Value = Point> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, t)| Point::new(x, y, t))
    }

    fn close(a: Point, b: Point, tol: f64) -> bool {
        let s = 1.0 + a.euclid_dist(Point::ORIGIN).max(b.euclid_dist(Point::ORIGIN));
        a.euclid_dist(b) <= tol * s
    }

    #[test]
    fn product_matches_definition() {
        let p = Point::new(1.0, 2.0, 3.0);
        let q = Point::new(-0.5, 4.0, 1.0);
        assert_eq!(p * q, Point::new(0.5, 6.0, 4.0 + 2.0 * (-0.5 * 2.0 - 1.0 * 4.0)));
    }

    #[test]
    fn gauge_of_vertical_and_horizontal_points() {
        assert_eq!(Point::new(0.0, 0.0, 16.0).gauge(), 4.0);
        assert_eq!(Point::new(3.0, 4.0, 0.0).gauge(), 5.0);
        assert!(Point::new(1e200, 0.0, 0.0).checked_gauge().is_ok());
        assert!(Point::new(f64::MAX, f64::MAX, f64::MAX).checked_gauge().is_err());
    }

    #[test]
    fn dilation_rejects_nonpositive() {
        assert!(dilate(0.0, Point::ORIGIN).is_err());
        assert!(dilate(-1.0, Point::ORIGIN).is_err());
        assert_eq!(dilate(2.0, Point::new(1.0, 1.0, 1.0)).unwrap(), Point::new(2.0, 2.0, 4.0));
    }

    #[test]
    fn bracket_of_frame_on_polynomial() {
        let f = |p: Point| p.x * p.x * p.y + p.t * p.t + p.x * p.t;
        let h = 1e-3;
        let p = Point::new(0.3, -0.7, 1.1);
        let xy = hderiv(|q| hderiv(f, q, Direction::Y, h).unwrap(), p, Direction::X, h).unwrap();
        let yx = hderiv(|q| hderiv(f, q, Direction::X, h).unwrap(), p, Direction::Y, h).unwrap();
        let tf = hderiv(f, p, Direction::T, h).unwrap();
        assert!((xy - yx + 4.0 * tf).abs() < 1e-6);
    }

    #[test]
    fn frame_components() {
        let p = Point::new(1.0, 2.0, 0.0);
        let [x, y, t] = frame(p);
        assert_eq!((x.a, x.b, x.c), (1.0, 0.0, 4.0));
        assert_eq!((y.a, y.b, y.c), (0.0, 1.0, -2.0));
        assert_eq!((t.a, t.b, t.c), (0.0, 0.0, 1.0));
    }

    proptest! {
        #[test]
        fn associativity(p in pt(), q in pt(), r in pt()) {
            prop_assert!(close((p * q) * r, p * (q * r), 1e-12));
        }

        #[test]
        fn inverse_is_two_sided(p in pt()) {
            prop_assert!(close(p * p.inv(), Point::ORIGIN, 1e-15));
            prop_assert!(close(p.inv() * p, Point::ORIGIN, 1e-15));
        }

        #[test]
        fn dilation_is_automorphism(p in pt(), q in pt(), r in 0.1..10.0f64) {
            let lhs = (p * q).scaled(r);
            let rhs = p.scaled(r) * q.scaled(r);
            prop_assert!(close(lhs, rhs, 1e-12));
        }

        #[test]
        fn distance_is_left_invariant_and_homogeneous(p in pt(), q in pt(), u in pt(), r in 0.1..10.0f64) {
            let d = p.dist(q);
            prop_assert!(((u * p).dist(u * q) - d).abs() <= 1e-10 * (1.0 + d));
            prop_assert!((p.scaled(r).dist(q.scaled(r)) - r * d).abs() <= 1e-10 * (1.0 + r * d));
            prop_assert!((d - q.dist(p)).abs() <= 1e-10 * (1.0 + d));
        }

        #[test]
        fn triangle_inequality(p in pt(), q in pt(), r in pt()) {
            prop_assert!(p.dist(r) <= p.dist(q) + q.dist(r) + 1e-10);
        }
    }
}
