//! Flows of contact fields and words of flows, dilations and translations.
//!
//! Flows are integrated with classical RK4 at a fixed step. The horizontal
//! differential `A` is co-integrated through `A' = D_H v(f_s) A` and the log
//! Jacobian through `(log J)' = 2 T phi(f_s)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::contact::{ContactField, Mat2};
use crate::error::{Error, Result};
use crate::group::{hderiv, Direction, Point, QuadratureConfig};
use crate::quadrature::{rng, sample_unit_ball, sphere_grid, UNIT_BALL_VOLUME};

/// A map of the group into itself.
pub trait PointMap: Send + Sync {
    fn apply(&self, p: Point) -> Point;
}

impl<F: Fn(Point) -> Point + Send + Sync> PointMap for F {
    fn apply(&self, p: Point) -> Point {
        self(p)
    }
}

pub const DEFAULT_STEPS: usize = 256;
pub const DEFAULT_ESCAPE_RADIUS: f64 = 1e6;

/// Time-`s` flow of a contact field.
#[derive(Clone, Debug)]
pub struct FlowMap {
    pub field: Arc<ContactField>,
    pub time: f64,
    pub steps: usize,
    pub escape_radius: f64,
}

/// Endpoint of a flow line with its horizontal differential and log Jacobian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowSample {
    pub point: Point,
    pub dh: Mat2,
    pub log_jacobian: f64,
}

/// One row of a trajectory dump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub sigma: f64,
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

type State = [f64; 8];

fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn det(a: Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

impl FlowMap {
    pub fn new(field: Arc<ContactField>, time: f64) -> Self {
        FlowMap { field, time, steps: DEFAULT_STEPS, escape_radius: DEFAULT_ESCAPE_RADIUS }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps.max(1);
        self
    }

    pub fn step(&self) -> f64 {
        self.time / self.steps as f64
    }

    pub fn inverse(&self) -> FlowMap {
        FlowMap { time: -self.time, ..self.clone() }
    }

    fn check(&self, p: Point, time: f64) -> Result<()> {
        if !p.is_finite() || p.gauge() > self.escape_radius {
            return Err(Error::Escape { time, point: p });
        }
        Ok(())
    }

    /// Endpoint of the flow line through `p`.
    pub fn apply(&self, p: Point) -> Result<Point> {
        let h = self.step();
        let f = |q: [f64; 3]| self.field.eval(Point::from_array(q));
        let mut y = p.to_array();
        for i in 0..self.steps {
            let k1 = f(y);
            let k2 = f(axpy(y, 0.5 * h, k1));
            let k3 = f(axpy(y, 0.5 * h, k2));
            let k4 = f(axpy(y, h, k3));
            for a in 0..3 {
                y[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
            }
            self.check(Point::from_array(y), (i + 1) as f64 * h)?;
        }
        Ok(Point::from_array(y))
    }

    fn deriv(&self, s: &State) -> State {
        let p = Point::new(s[0], s[1], s[2]);
        let (v, dh, tphi) = self.field.eval_with_differential(p);
        let a = [[s[3], s[4]], [s[5], s[6]]];
        let m = mat_mul(dh, a);
        [v[0], v[1], v[2], m[0][0], m[0][1], m[1][0], m[1][1], 2.0 * tphi]
    }

    fn integrate_full(&self, p: Point, mut record: impl FnMut(f64, &State)) -> Result<FlowSample> {
        let h = self.step();
        let mut s: State = [p.x, p.y, p.t, 1.0, 0.0, 0.0, 1.0, 0.0];
        record(0.0, &s);
        for i in 0..self.steps {
            let k1 = self.deriv(&s);
            let k2 = self.deriv(&axpy8(&s, 0.5 * h, &k1));
            let k3 = self.deriv(&axpy8(&s, 0.5 * h, &k2));
            let k4 = self.deriv(&axpy8(&s, h, &k3));
            for a in 0..8 {
                s[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
            }
            let sigma = (i + 1) as f64 * h;
            self.check(Point::new(s[0], s[1], s[2]), sigma)?;
            record(sigma, &s);
        }
        Ok(FlowSample {
            point: Point::new(s[0], s[1], s[2]),
            dh: [[s[3], s[4]], [s[5], s[6]]],
            log_jacobian: s[7],
        })
    }

    /// Endpoint, horizontal differential and variational log Jacobian.
    pub fn apply_with_differential(&self, p: Point) -> Result<FlowSample> {
        self.integrate_full(p, |_, _| {})
    }

    /// Endpoint and variational log Jacobian, without the differential.
    pub fn apply_with_log_jacobian(&self, p: Point) -> Result<(Point, f64)> {
        let h = self.step();
        let f = |q: [f64; 4]| {
            let pt = Point::new(q[0], q[1], q[2]);
            let g = self.field.source.gradient(pt);
            let phi = self.field.source.value(pt);
            let v1 = -0.25 * g[1];
            let v2 = 0.25 * g[0];
            [v1, v2, phi + 2.0 * pt.y * v1 - 2.0 * pt.x * v2, 2.0 * g[2]]
        };
        let add = |y: [f64; 4], c: f64, k: [f64; 4]| [y[0] + c * k[0], y[1] + c * k[1], y[2] + c * k[2], y[3] + c * k[3]];
        let mut y = [p.x, p.y, p.t, 0.0];
        for i in 0..self.steps {
            let k1 = f(y);
            let k2 = f(add(y, 0.5 * h, k1));
            let k3 = f(add(y, 0.5 * h, k2));
            let k4 = f(add(y, h, k3));
            for a in 0..4 {
                y[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
            }
            self.check(Point::new(y[0], y[1], y[2]), (i + 1) as f64 * h)?;
        }
        Ok((Point::new(y[0], y[1], y[2]), y[3]))
    }

    /// Flow line with the differential at every step (`steps + 1` rows).
    pub fn trajectory(&self, p: Point) -> Result<Vec<TrajectoryRow>> {
        let mut rows = Vec::with_capacity(self.steps + 1);
        self.integrate_full(p, |sigma, s| {
            rows.push(TrajectoryRow {
                sigma,
                x: s[0],
                y: s[1],
                t: s[2],
                m11: s[3],
                m12: s[4],
                m21: s[5],
                m22: s[6],
            })
        })?;
        Ok(rows)
    }
}

fn axpy(y: [f64; 3], h: f64, k: [f64; 3]) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

fn axpy8(y: &State, h: f64, k: &State) -> State {
    let mut out = *y;
    for a in 0..8 {
        out[a] += h * k[a];
    }
    out
}

/// Letter of a word of maps.
#[derive(Clone, Debug)]
pub enum Letter {
    Flow(FlowMap),
    Dilation(f64),
    /// Left translation `p -> a * p`.
    Translation(Point),
}

impl Letter {
    fn apply(&self, p: Point) -> Result<Point> {
        match self {
            Letter::Flow(f) => f.apply(p),
            Letter::Dilation(r) => crate::group::dilate(*r, p),
            Letter::Translation(a) => Ok(*a * p),
        }
    }

    fn inverse(&self) -> Letter {
        match self {
            Letter::Flow(f) => Letter::Flow(f.inverse()),
            Letter::Dilation(r) => Letter::Dilation(1.0 / r),
            Letter::Translation(a) => Letter::Translation(a.inv()),
        }
    }

    fn log_sample(&self, p: Point) -> Result<(Point, f64)> {
        match self {
            Letter::Flow(f) => f.apply_with_log_jacobian(p),
            Letter::Dilation(r) => Ok((crate::group::dilate(*r, p)?, 4.0 * r.ln())),
            Letter::Translation(a) => Ok((*a * p, 0.0)),
        }
    }

    fn sample(&self, p: Point) -> Result<FlowSample> {
        match self {
            Letter::Flow(f) => f.apply_with_differential(p),
            Letter::Dilation(r) => Ok(FlowSample {
                point: crate::group::dilate(*r, p)?,
                dh: [[*r, 0.0], [0.0, *r]],
                log_jacobian: 4.0 * r.ln(),
            }),
            Letter::Translation(a) => Ok(FlowSample { point: *a * p, dh: IDENTITY, log_jacobian: 0.0 }),
        }
    }
}

/// Word of letters applied first to last.
#[derive(Clone, Debug, Default)]
pub struct ComposedMap {
    pub letters: Vec<Letter>,
}

impl ComposedMap {
    pub fn identity() -> Self {
        ComposedMap::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        ComposedMap { letters }
    }

    pub fn then(mut self, l: Letter) -> Self {
        self.letters.push(l);
        self
    }

    /// `other` after `self`.
    pub fn compose(mut self, other: &ComposedMap) -> Self {
        self.letters.extend(other.letters.iter().cloned());
        self
    }

    pub fn inverse(&self) -> ComposedMap {
        ComposedMap { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    pub fn apply(&self, p: Point) -> Result<Point> {
        self.letters.iter().try_fold(p, |q, l| l.apply(q))
    }

    pub fn apply_inverse(&self, p: Point) -> Result<Point> {
        self.letters.iter().rev().try_fold(p, |q, l| l.inverse().apply(q))
    }

    /// Image, horizontal differential and log Jacobian by the chain rule.
    pub fn sample(&self, p: Point) -> Result<FlowSample> {
        let mut acc = FlowSample { point: p, dh: IDENTITY, log_jacobian: 0.0 };
        for l in &self.letters {
            let s = l.sample(acc.point)?;
            acc = FlowSample {
                point: s.point,
                dh: mat_mul(s.dh, acc.dh),
                log_jacobian: acc.log_jacobian + s.log_jacobian,
            };
        }
        Ok(acc)
    }

    pub fn log_jacobian(&self, p: Point) -> Result<f64> {
        let mut acc = (p, 0.0);
        for l in &self.letters {
            let (q, lj) = l.log_sample(acc.0)?;
            acc = (q, acc.1 + lj);
        }
        Ok(acc.1)
    }
}

impl PointMap for ComposedMap {
    fn apply(&self, p: Point) -> Point {
        ComposedMap::apply(self, p).unwrap_or(Point::new(f64::NAN, f64::NAN, f64::NAN))
    }
}

/// Radius ladder shared by the small-scale estimators.
pub const RADIUS_LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Three estimates of the Jacobian of a word at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobianTriple {
    pub variational: f64,
    pub volume: f64,
    pub det_squared: f64,
    pub volume_per_radius: Vec<f64>,
    /// Set when the volume ratios across the ladder are inconsistent with
    /// an `O(r^2)` approach to the limit.
    pub flagged: bool,
}

impl JacobianTriple {
    pub fn max_relative_spread(&self) -> f64 {
        let v = [self.variational, self.volume, self.det_squared];
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo - 1.0
    }
}

/// Volume ratio `|F(B(p, r))| / |B(p, r)|` from the radial function of the
/// image around `F(p)`: along each direction `w` of a sphere grid, `rho(w)`
/// solves `d(F^{-1}(F(p) * delta_rho w), p) = r`, and
/// `|F(B(p, r))| = int rho^4 / 4 dsigma`. Small balls map to sets that are
/// star-shaped for dilations centred at `F(p)`.
pub fn volume_ratios(f: &ComposedMap, p: Point, radii: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let fp = f.apply(p)?;
    let inv = f.inverse();
    let n = cfg.grid_resolution.max(8);
    let sphere = sphere_grid(2 * n, n);
    let mut out = Vec::with_capacity(radii.len());
    for &rad in radii {
        let mut reach = 0.0f64;
        for (q, _) in &sphere {
            reach = reach.max(f.apply(p * q.scaled(rad))?.dist(fp));
        }
        let mut vol = 0.0;
        for (w, wt) in &sphere {
            let g = |s: f64| -> Result<f64> { Ok(inv.apply(fp * w.scaled(s))?.dist(p) - rad) };
            let rho = boundary_root(g, 2.0 * reach)?;
            vol += wt * rho.powi(4) / 4.0;
        }
        out.push(vol / ball_measure(rad));
    }
    Ok(out)
}

/// Root of an increasing `g` on `(0, hi]` with `g(0) < 0`, by regula falsi
/// with the Illinois modification; `hi` is doubled until it brackets.
fn boundary_root<G: Fn(f64) -> Result<f64>>(g: G, hi: f64) -> Result<f64> {
    let (mut a, mut fa) = (0.0, g(0.0)?);
    let (mut b, mut fb) = (hi, g(hi)?);
    let mut grow = 0;
    while fb < 0.0 {
        grow += 1;
        if grow > 60 {
            return Err(Error::Optimizer("image boundary not bracketed".into()));
        }
        a = b;
        fa = fb;
        b *= 2.0;
        fb = g(b)?;
    }
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = g(c)?;
        if fc == 0.0 || (b - a).abs() <= 1e-13 * b.abs() {
            return Ok(c);
        }
        if (fc < 0.0) == (fa < 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if fa.abs() < 1e-15 * (1.0 + a) {
            return Ok(a);
        }
        if fb.abs() < 1e-15 * (1.0 + b) {
            return Ok(b);
        }
    }
    Ok(0.5 * (a + b))
}

/// Least-squares fit `V(r) = J + c r^2` over the ladder; returns `(J, flagged)`.
fn extrapolate(radii: &[f64], v: &[f64]) -> (f64, bool) {
    let n = radii.len() as f64;
    let xs: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = v.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(v).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let j = my - slope * mx;
    let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
    (j, !(j > 0.0) || spread > 1.5)
}

pub fn jacobian_triple(f: &ComposedMap, p: Point, cfg: &QuadratureConfig) -> Result<JacobianTriple> {
    let s = f.sample(p)?;
    let per = volume_ratios(f, p, &RADIUS_LADDER, cfg)?;
    let (vol, flagged) = extrapolate(&RADIUS_LADDER, &per);
    let d = det(s.dh);
    Ok(JacobianTriple {
        variational: s.log_jacobian.exp(),
        volume: vol,
        det_squared: d * d,
        volume_per_radius: per,
        flagged,
    })
}

/// Metric dilatation `max d(Fp, Fq) / min d(Fp, Fq)` over `q` on spheres
/// `S(p, r)`, evaluated on a deterministic sphere grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilatationReport {
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Maximum over the two smallest radii.
    pub estimate: f64,
}

pub fn dilatation(f: &ComposedMap, p: Point, radii: &[f64], n_theta: usize, n_alpha: usize) -> Result<DilatationReport> {
    if radii.len() < 2 {
        return Err(Error::Config("dilatation needs at least two radii".into()));
    }
    let fp = f.apply(p)?;
    let sphere = sphere_grid(n_theta, n_alpha);
    let mut ratios = Vec::with_capacity(radii.len());
    for &r in radii {
        let (mut hi, mut lo) = (0.0f64, f64::INFINITY);
        for (q, _) in &sphere {
            let d = f.apply(p * q.scaled(r))?.dist(fp);
            hi = hi.max(d);
            lo = lo.min(d);
        }
        ratios.push(hi / lo);
    }
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|a, b| radii[*a].total_cmp(&radii[*b]));
    let estimate = ratios[order[0]].max(ratios[order[1]]);
    Ok(DilatationReport { radii: radii.to_vec(), ratios, estimate })
}

/// Contact residuals `X f3 - 2 f2 X f1 + 2 f1 X f2` and the same with `Y`.
pub fn contact_residual(f: &ComposedMap, p: Point, h: f64) -> Result<[f64; 2]> {
    let comp = |i: usize| move |q: Point| ComposedMap::apply(f, q).map(|r| r.to_array()[i]).unwrap_or(f64::NAN);
    let fp = f.apply(p)?;
    let mut out = [0.0; 2];
    for (k, dir) in [Direction::X, Direction::Y].into_iter().enumerate() {
        let d1 = hderiv(comp(0), p, dir, h)?;
        let d2 = hderiv(comp(1), p, dir, h)?;
        let d3 = hderiv(comp(2), p, dir, h)?;
        out[k] = d3 - 2.0 * fp.y * d1 + 2.0 * fp.x * d2;
    }
    Ok(out)
}

/// Empirical quasisymmetry profile: for sampled triples `(a, b, c)` with
/// `d(a, b) <= t d(a, c)`, the largest `d(Fa, Fb) / d(Fa, Fc)` per `t` bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsProfile {
    pub t_bins: Vec<f64>,
    pub eta: Vec<f64>,
}

pub fn qs_checks(f: &ComposedMap, center: Point, radius: f64, triples: usize, cfg: &QuadratureConfig) -> Result<QsProfile> {
    let t_bins = vec![0.25, 0.5, 1.0, 2.0, 4.0];
    let mut eta = vec![0.0f64; t_bins.len()];
    let mut r = rng(cfg.rng_seed ^ 0x9e37_79b9);
    for _ in 0..triples {
        let a = center * sample_unit_ball(&mut r).scaled(radius);
        let b = center * sample_unit_ball(&mut r).scaled(radius);
        let c = center * sample_unit_ball(&mut r).scaled(radius);
        let (dab, dac) = (a.dist(b), a.dist(c));
        if dac == 0.0 {
            continue;
        }
        let t = dab / dac;
        let (fa, fb, fc) = (f.apply(a)?, f.apply(b)?, f.apply(c)?);
        let ratio = fa.dist(fb) / fa.dist(fc);
        for (k, tb) in t_bins.iter().enumerate() {
            if t <= *tb {
                eta[k] = eta[k].max(ratio);
            }
        }
    }
    Ok(QsProfile { t_bins, eta })
}

/// Ball volume used for normalizing Jacobian estimates.
pub fn ball_measure(r: f64) -> f64 {
    UNIT_BALL_VOLUME * r.powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{ConstantPotential, Polynomial, RadialStretch, TranslationPotential};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn flow<P: crate::contact::Potential + 'static>(p: P, s: f64) -> FlowMap {
        FlowMap::new(Arc::new(ContactField::from_potential(p, &cfg())), s)
    }

    #[test]
    fn constant_potential_translates_vertically() {
        let f = flow(ConstantPotential(1.0), 0.75);
        let p = Point::new(0.3, -1.0, 2.0);
        let q = f.apply(p).unwrap();
        assert!((q.t - 2.75).abs() < 1e-12 && q.x == p.x && q.y == p.y);
    }

    #[test]
    fn linear_t_flow_is_dilation() {
        let f = flow(Polynomial { terms: vec![(1.0, [0, 0, 1])] }, 0.4);
        let p = Point::new(0.5, 0.2, -0.3);
        let s = f.apply_with_differential(p).unwrap();
        let expect = p.scaled((0.2f64).exp());
        assert!(s.point.euclid_dist(expect) < 1e-10);
        assert!((s.log_jacobian - 0.8).abs() < 1e-12);
    }

    #[test]
    fn translation_potential_flow_is_left_translation() {
        let tp = TranslationPotential { c: [0.3, -0.2, 0.5] };
        let f = flow(tp, 1.5);
        let p = Point::new(1.0, 2.0, -1.0);
        let g = tp.generator();
        let a = Point::new(g.x * 1.5, g.y * 1.5, g.t * 1.5);
        assert!(f.apply(p).unwrap().euclid_dist(a * p) < 1e-10);
    }

    #[test]
    fn radial_stretch_gauge_law() {
        let f = flow(RadialStretch, 0.5);
        let p = Point::new(0.8, 0.3, 1.7);
        let q = f.apply(p).unwrap();
        assert!((q.gauge() - p.gauge().powf((-0.5f64).exp())).abs() < 1e-8);
    }

    #[test]
    fn det_trace_identity() {
        let f = flow(RadialStretch, 0.5);
        let s = f.apply_with_differential(Point::new(0.8, 0.3, 1.7)).unwrap();
        let d = det(s.dh);
        assert!((d * d / s.log_jacobian.exp() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn trajectory_rows() {
        let rows = flow(RadialStretch, 0.5).trajectory(Point::new(1.0, 0.0, 0.5)).unwrap();
        assert_eq!(rows.len(), 257);
        assert_eq!(rows[0].m11, 1.0);
        assert!((rows[256].sigma - 0.5).abs() < 1e-15);
    }

    #[test]
    fn escape_is_reported() {
        let mut f = flow(ConstantPotential(1.0), 10.0);
        f.escape_radius = 2.0;
        assert!(matches!(f.apply(Point::ORIGIN), Err(Error::Escape { .. })));
    }

    #[test]
    fn word_inverse_round_trip() {
        let w = ComposedMap::new(vec![
            Letter::Flow(flow(RadialStretch, 0.3)),
            Letter::Dilation(1.7),
            Letter::Translation(Point::new(0.1, 0.2, 0.3)),
        ]);
        let p = Point::new(0.4, -0.6, 0.9);
        let q = w.apply(p).unwrap();
        assert!(w.apply_inverse(q).unwrap().euclid_dist(p) < 1e-8);
        assert!(w.inverse().apply(q).unwrap().euclid_dist(p) < 1e-8);
    }

    #[test]
    fn contact_residual_vanishes_for_flows() {
        let w = ComposedMap::new(vec![Letter::Flow(flow(RadialStretch, 0.3))]);
        let r = contact_residual(&w, Point::new(0.4, -0.6, 0.9), 1e-4).unwrap();
        assert!(r[0].abs() < 1e-6 && r[1].abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn dilation_has_unit_dilatation() {
        let w = ComposedMap::new(vec![Letter::Dilation(2.0)]);
        let d = dilatation(&w, Point::new(0.5, 0.5, 0.5), &RADIUS_LADDER, 12, 6).unwrap();
        assert!((d.estimate - 1.0).abs() < 1e-12);
    }
}
