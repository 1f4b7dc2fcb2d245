//! Quadrature on the Heisenberg group.
//!
//! The unit sphere `S(1)` is parameterized by
//! `q(theta, alpha) = (sqrt(cos a) cos theta, sqrt(cos a) sin theta, sin a)`
//! with `theta in [0, 2pi)` and `alpha in [-pi/2, pi/2]`. In these coordinates
//! the surface measure of the polar decomposition `dp = r^3 dr dsigma` is
//! `dtheta dalpha`, so `sigma(S(1)) = 2 pi^2` and `|B(1)| = pi^2 / 2`.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Point, QuadratureConfig};

pub const SPHERE_MEASURE: f64 = 2.0 * PI * PI;
pub const UNIT_BALL_VOLUME: f64 = PI * PI / 2.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sphere_point(theta: f64, alpha: f64) -> Point {
    let c = alpha.cos().max(0.0).sqrt();
    Point::new(c * theta.cos(), c * theta.sin(), alpha.sin())
}

/// Uniform sample of `B(1)`: `r = U^{1/4}` and `(theta, alpha)` uniform.
pub fn sample_unit_ball<R: Rng>(rng: &mut R) -> Point {
    let r = rng.gen::<f64>().powf(0.25);
    sphere_point(2.0 * PI * rng.gen::<f64>(), PI * (rng.gen::<f64>() - 0.5)).scaled(r)
}

/// Uniform sample of `B(p, r) = p * delta_r(B(1))`.
pub fn sample_ball<R: Rng>(rng: &mut R, p: Point, r: f64) -> Point {
    p * sample_unit_ball(rng).scaled(r)
}

/// Uniform sample of the unit sphere with respect to `sigma`.
pub fn sample_sphere<R: Rng>(rng: &mut R) -> Point {
    sphere_point(2.0 * PI * rng.gen::<f64>(), PI * (rng.gen::<f64>() - 0.5))
}

/// Deterministic grid on `S(1)`: `n_theta` equispaced longitudes times
/// `n_alpha` Gauss-Legendre latitudes, with weights summing to `2 pi^2`.
pub fn sphere_grid(n_theta: usize, n_alpha: usize) -> Vec<(Point, f64)> {
    let gl = GaussLegendre::new(n_alpha);
    let mut out = Vec::with_capacity(n_theta * n_alpha);
    for (xa, wa) in gl.on(-PI / 2.0, PI / 2.0) {
        for i in 0..n_theta {
            let theta = 2.0 * PI * (i as f64 + 0.5) / n_theta as f64;
            out.push((sphere_point(theta, xa), wa * 2.0 * PI / n_theta as f64));
        }
    }
    out
}

/// Axis-aligned box containing `B(p, r)`.
pub fn ball_bounding_box(p: Point, r: f64) -> ([f64; 3], [f64; 3]) {
    let ht = r * r + 2.0 * r * (p.x.abs() + p.y.abs());
    ([p.x - r, p.y - r, p.t - ht], [p.x + r, p.y + r, p.t + ht])
}

/// Hit-or-miss estimate of the Lebesgue measure of `B(p, r)` from samples of
/// its Cartesian bounding box.
pub fn ball_volume(p: Point, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Config(format!("radius must be positive, got {r}")));
    }
    let (lo, hi) = ball_bounding_box(p, r);
    let mut rng = rng(cfg.rng_seed);
    let mut hits = 0usize;
    for _ in 0..cfg.mc_samples {
        let q = Point::new(
            rng.gen_range(lo[0]..hi[0]),
            rng.gen_range(lo[1]..hi[1]),
            rng.gen_range(lo[2]..hi[2]),
        );
        if q.dist(p) < r {
            hits += 1;
        }
    }
    let box_vol = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
    Ok(box_vol * hits as f64 / cfg.mc_samples as f64)
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (m + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Polar-coordinate integration `int f = int_{S(1)} int_0^R f(delta_r q) r^3 dr dsigma(q)`.
///
/// The radial integral is split into dyadic panels `[2^k, 2^{k+1}]` (plus
/// `[0, 2^kmin]`), each integrated by Gauss-Legendre, so indicator functions of
/// balls with dyadic radii are integrated without a discontinuity inside a
/// panel. With `r_max = inf` the panels are summed outward until the shell
/// contributions become negligible; if they fail to decay the integrand is
/// reported as non-integrable.
pub fn polar_integrate<F: Fn(Point) -> f64>(f: F, r_max: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if !(r_max > 0.0) {
        return Err(Error::Config(format!("radial cutoff must be positive, got {r_max}")));
    }
    let n_ang = cfg.grid_resolution.max(4);
    let sphere = sphere_grid(2 * n_ang, n_ang);
    let radial = GaussLegendre::new(n_ang.max(8));
    let shell = |a: f64, b: f64| -> f64 {
        let mut s = 0.0;
        for (r, wr) in radial.on(a, b) {
            let r3 = r * r * r;
            let mut inner = 0.0;
            for (q, wq) in &sphere {
                inner += wq * f(q.scaled(r));
            }
            s += wr * r3 * inner;
        }
        s
    };
    const KMIN: i32 = -20;
    let mut total = shell(0.0, 2f64.powi(KMIN).min(r_max));
    let mut k = KMIN;
    let mut small_run = 0;
    let mut seen_nonzero = false;
    let mut last: Vec<f64> = Vec::new();
    loop {
        let a = 2f64.powi(k);
        if a >= r_max {
            break;
        }
        let b = 2f64.powi(k + 1).min(r_max);
        let c = shell(a, b);
        if !c.is_finite() {
            return Err(Error::Integrability(format!("non-finite shell contribution on [{a}, {b}]")));
        }
        total += c;
        if r_max.is_infinite() {
            last.push(c.abs());
            seen_nonzero |= c != 0.0;
            if seen_nonzero && k >= 0 && c.abs() <= 1e-14 * total.abs() {
                small_run += 1;
                if small_run >= 3 {
                    break;
                }
            } else {
                small_run = 0;
            }
            if k >= 60 {
                let n = last.len();
                let tail = &last[n - 4..];
                let decaying = tail.windows(2).all(|w| w[1] <= 0.75 * w[0]);
                if !decaying {
                    return Err(Error::Integrability(format!(
                        "dyadic shell contributions do not decay (last {:?})",
                        tail
                    )));
                }
                break;
            }
        }
        k += 1;
    }
    Ok(total)
}

/// Adaptive Gauss-Kronrod (7, 15) integration of a scalar function on `[a, b]`.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut stack = vec![(a, b, gk15(&mut f, a, b))];
    let mut total = 0.0;
    let mut whole = stack[0].2 .0;
    let mut depth_guard = 0usize;
    while let Some((lo, hi, (val, err))) = stack.pop() {
        let tol = abs_tol.max(rel_tol * whole.abs());
        let width_frac = (hi - lo) / (b - a);
        if err <= tol * width_frac.max(1e-3) || hi - lo < 1e-12 * (b - a).abs() || depth_guard > 200_000 {
            total += val;
            continue;
        }
        depth_guard += 1;
        let mid = 0.5 * (lo + hi);
        let left = gk15(&mut f, lo, mid);
        let right = gk15(&mut f, mid, hi);
        whole += left.0 + right.0 - val;
        stack.push((lo, mid, left));
        stack.push((mid, hi, right));
    }
    total
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Iterated adaptive quadrature of `f` over the Cartesian box `lo..hi`,
/// in the order `t` (innermost), `y`, `x`.
pub fn cartesian_integrate<F: Fn(Point) -> f64>(f: F, lo: [f64; 3], hi: [f64; 3], tol: f64) -> f64 {
    adaptive_integrate(
        |x| {
            adaptive_integrate(
                |y| adaptive_integrate(|t| f(Point::new(x, y, t)), lo[2], hi[2], tol * 1e-2, tol * 1e-2),
                lo[1],
                hi[1],
                tol * 1e-1,
                tol * 1e-1,
            )
        },
        lo[0],
        hi[0],
        tol,
        tol,
    )
}

/// Iterated Cartesian quadrature over all of `R^3`, using `u -> u / (1 - u^2)`
/// on each axis.
pub fn cartesian_integrate_whole_space<F: Fn(Point) -> f64>(f: F, tol: f64) -> f64 {
    let map = |u: f64| {
        let d = 1.0 - u * u;
        (u / d, (1.0 + u * u) / (d * d))
    };
    let lim = 1.0 - 1e-9;
    cartesian_integrate(
        |p| {
            let (x, jx) = map(p.x);
            let (y, jy) = map(p.y);
            let (t, jt) = map(p.t);
            let v = f(Point::new(x, y, t));
            if v == 0.0 {
                0.0
            } else {
                v * jx * jy * jt
            }
        },
        [-lim; 3],
        [lim; 3],
        tol,
    )
}

/// Exponential integral `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 is evaluated for positive arguments only");
    if x <= 1.0 {
        const EULER: f64 = 0.577_215_664_901_532_9;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        -EULER - x.ln() + sum
    } else {
        // Modified Lentz evaluation of the continued fraction.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Halton point in `[0, 1)^3` with bases 2, 3, 5.
pub fn halton3(i: usize) -> [f64; 3] {
    [radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)]
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let inv = 1.0 / base as f64;
    while i > 0 {
        f *= inv;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Quasi-random points of `B(center, radius)` by rejection from a Halton
/// sequence on the bounding box, skipping points within `exclusion` of any
/// listed point.
pub fn quasi_random_ball(center: Point, radius: f64, n: usize, exclude: &[Point], exclusion: f64) -> Vec<Point> {
    let (lo, hi) = ball_bounding_box(center, radius);
    let mut out = Vec::with_capacity(n);
    let mut i = 1usize;
    while out.len() < n {
        let h = halton3(i);
        i += 1;
        let p = Point::new(
            lo[0] + h[0] * (hi[0] - lo[0]),
            lo[1] + h[1] * (hi[1] - lo[1]),
            lo[2] + h[2] * (hi[2] - lo[2]),
        );
        if p.dist(center) < radius && exclude.iter().all(|a| p.dist(*a) >= exclusion) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(6);
        let v = gl.integrate(0.0, 2.0, |x| x.powi(11));
        assert!((v - 2f64.powi(12) / 12.0).abs() < 1e-10);
        assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_points_have_unit_gauge() {
        for (q, _) in sphere_grid(9, 7) {
            assert!((q.gauge() - 1.0).abs() < 1e-14);
        }
        let w: f64 = sphere_grid(9, 7).iter().map(|(_, w)| w).sum();
        assert!((w - SPHERE_MEASURE).abs() < 1e-12);
    }

    #[test]
    fn samples_lie_in_ball() {
        let mut r = rng(1);
        let p = Point::new(1.0, -2.0, 0.5);
        for _ in 0..1000 {
            assert!(sample_ball(&mut r, p, 0.3).dist(p) < 0.3 + 1e-12);
        }
    }

    #[test]
    fn e1_reference_values() {
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((exp_integral_e1(0.1) - 1.822_923_958_419_390_7).abs() < 1e-13);
        assert!((exp_integral_e1(5.0) - 0.001_148_295_591_275_325_7).abs() < 1e-16);
    }

    #[test]
    fn adaptive_handles_sqrt_edge() {
        let v = adaptive_integrate(|x| (1.0 - x * x).max(0.0).sqrt(), -2.0, 2.0, 1e-10, 1e-10);
        assert!((v - PI / 2.0).abs() < 1e-7);
    }

    #[test]
    fn polar_volume_of_unit_ball_is_exact() {
        let cfg = QuadratureConfig::default();
        let v = polar_integrate(|p| if p.gauge() < 1.0 { 1.0 } else { 0.0 }, f64::INFINITY, &cfg).unwrap();
        assert!((v - UNIT_BALL_VOLUME).abs() < 1e-10);
    }

    #[test]
    fn polar_detects_divergence() {
        let cfg = QuadratureConfig::default();
        let r = polar_integrate(|p| 1.0 / (1.0 + p.gauge4()), f64::INFINITY, &cfg);
        assert!(matches!(r, Err(Error::Integrability(_))));
    }

    #[test]
    fn halton_is_in_unit_cube() {
        for i in 0..100 {
            assert!(halton3(i).iter().all(|v| (0.0..1.0).contains(v)));
        }
    }
}
