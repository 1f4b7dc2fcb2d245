//! Lengths and distances: Carnot-Carathéodory distance by direct optimization
//! over horizontal polygons, `omega`-weighted lengths and distances, the
//! David-Semmes quasi-distance and the comparability suite.
//!
//! A horizontal polygon from `p` is described in `p`-relative coordinates by
//! planar vertices `z_0 = 0, ..., z_n`; each straight planar segment lifts
//! horizontally with `dt = 2 (x_b y_a - x_a y_b)`. A height defect `D` left at
//! the end is closed by a horizontal circle of length `sqrt(pi |D|)`, so every
//! candidate is an admissible curve and its length an upper bound.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::ComposedMap;
use crate::grid::{Grid3, TrilinearField};
use crate::group::{Point, QuadratureConfig};
use crate::quadrature::{ball_bounding_box, rng, sample_ball, GaussLegendre, UNIT_BALL_VOLUME};

/// Positive weight on the group.
pub trait Weight: Send + Sync {
    fn value(&self, p: Point) -> f64;

    /// `omega^{1/4}`.
    fn fourth_root(&self, p: Point) -> f64 {
        self.value(p).sqrt().sqrt()
    }
}

#[derive(Clone)]
pub enum WeightKind {
    Constant(f64),
    /// `log omega` on a grid.
    Tabulated(TrilinearField),
    Analytic(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct WeightField {
    pub kind: WeightKind,
    pub provenance: String,
}

impl std::fmt::Debug for WeightField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeightField({})", self.provenance)
    }
}

impl WeightField {
    pub fn constant(c: f64) -> Self {
        WeightField { kind: WeightKind::Constant(c), provenance: format!("constant {c}") }
    }

    pub fn analytic(f: Arc<dyn Fn(Point) -> f64 + Send + Sync>, label: &str) -> Self {
        WeightField { kind: WeightKind::Analytic(f), provenance: label.to_string() }
    }

    /// `omega = J_F` evaluated through the map at every point.
    pub fn from_map_exact(f: ComposedMap) -> Self {
        let f = Arc::new(f);
        let eval = move |p: Point| f.log_jacobian(p).map(f64::exp).unwrap_or(f64::NAN);
        WeightField { kind: WeightKind::Analytic(Arc::new(eval)), provenance: "from-map J_F".into() }
    }

    /// `omega = J_F` tabulated on the box of `B(radius)`.
    pub fn from_map(f: &ComposedMap, radius: f64, nodes: usize) -> Result<Self> {
        let (lo, hi) = ball_bounding_box(Point::ORIGIN, radius);
        let grid = Grid3::spanning(lo, hi, [nodes; 3]);
        let mut bad = Vec::new();
        let table = TrilinearField::tabulate(grid, |p| match f.log_jacobian(p) {
            Ok(v) => v,
            Err(_) => {
                bad.push(p);
                0.0
            }
        });
        if !bad.is_empty() {
            return Err(Error::NonFinite(bad));
        }
        Ok(WeightField { kind: WeightKind::Tabulated(table), provenance: "from-map J_F".into() })
    }
}

impl Weight for WeightField {
    fn value(&self, p: Point) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::Tabulated(t) => t.value(p).exp(),
            WeightKind::Analytic(f) => f(p),
        }
    }

    fn fourth_root(&self, p: Point) -> f64 {
        match &self.kind {
            WeightKind::Tabulated(t) => (0.25 * t.value(p)).exp(),
            _ => self.value(p).sqrt().sqrt(),
        }
    }
}

/// Partial sums `sum d(gamma(s_i), gamma(s_{i+1}))` over uniform partitions
/// of `[a, b]` into `m` pieces, for each `m`.
pub fn length_d<F: Fn(f64) -> Point>(gamma: F, a: f64, b: f64, ms: &[usize]) -> Vec<f64> {
    ms.iter()
        .map(|&m| {
            let pts: Vec<Point> = (0..=m).map(|i| gamma(a + (b - a) * i as f64 / m as f64)).collect();
            pts.windows(2).map(|w| w[0].dist(w[1])).sum()
        })
        .collect()
}

/// Horizontal polygon from `start` with a closing loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizontalCurve {
    pub start: Point,
    /// Planar vertices relative to `start`, beginning with `(0, 0)`.
    pub vertices: Vec<[f64; 2]>,
    /// Height closed by the terminal loop.
    pub loop_defect: f64,
}

fn cross(b: [f64; 2], a: [f64; 2]) -> f64 {
    b[0] * a[1] - a[0] * b[1]
}

impl HorizontalCurve {
    /// Lifted vertices relative to `start`.
    pub fn lifted(&self) -> Vec<Point> {
        let mut t = 0.0;
        let mut out = Vec::with_capacity(self.vertices.len());
        for (k, z) in self.vertices.iter().enumerate() {
            if k > 0 {
                t += 2.0 * cross(*z, self.vertices[k - 1]);
            }
            out.push(Point::new(z[0], z[1], t));
        }
        out
    }

    pub fn end(&self) -> Point {
        let last = *self.lifted().last().expect("curve has vertices");
        self.start * Point::new(last.x, last.y, last.t + self.loop_defect)
    }

    pub fn loop_length(&self) -> f64 {
        (std::f64::consts::PI * self.loop_defect.abs()).sqrt()
    }

    pub fn length(&self) -> f64 {
        let seg: f64 = self.vertices.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).sum();
        seg + self.loop_length()
    }

    /// Points along the curve, `per_segment` per polygon edge and
    /// `4 * per_segment` on the loop, in absolute coordinates.
    pub fn sample(&self, per_segment: usize) -> Vec<Point> {
        let lifted = self.lifted();
        let mut out = vec![self.start];
        for w in lifted.windows(2) {
            for i in 1..=per_segment {
                let s = i as f64 / per_segment as f64;
                let q = Point::new(w[0].x + s * (w[1].x - w[0].x), w[0].y + s * (w[1].y - w[0].y), w[0].t + s * (w[1].t - w[0].t));
                out.push(self.start * q);
            }
        }
        if self.loop_defect != 0.0 {
            let end = self.start * *lifted.last().unwrap();
            let rad = (self.loop_defect.abs() / (4.0 * std::f64::consts::PI)).sqrt();
            let sign = -self.loop_defect.signum();
            let n = 4 * per_segment;
            let mut prev = [0.0, 0.0];
            let mut t = 0.0;
            for i in 1..=n {
                let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let z = [rad * (th.cos() - 1.0), sign * rad * th.sin()];
                t += 2.0 * cross(z, prev);
                prev = z;
                out.push(end * Point::new(z[0], z[1], t));
            }
        }
        out
    }

    /// Largest `|dt - 2 (x dy - y dx)|`-type mismatch between consecutive
    /// samples, relative to the step; zero for exact lifts.
    pub fn horizontality_residual(&self, per_segment: usize) -> f64 {
        let pts = self.sample(per_segment);
        pts.windows(2)
            .map(|w| {
                let rel = w[0].inv() * w[1];
                let step = rel.x.hypot(rel.y).max(1e-300);
                rel.t.abs() / step
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistanceOptions {
    /// Polygon edges.
    pub vertices: usize,
    /// Highest basis frequency; the search runs at 2, 4, ... up to this.
    pub max_modes: usize,
    pub restarts: usize,
    /// Final pattern-search step relative to the coefficient scale.
    pub tol: f64,
    /// Gauss-Legendre nodes per segment for weighted lengths.
    pub quadrature_nodes: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { vertices: 64, max_modes: 8, restarts: 3, tol: 1e-6, quadrature_nodes: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub curve: HorizontalCurve,
    /// Optimized value from every start.
    pub restarts: Vec<f64>,
}

/// Offset basis on `[0, 1]`, all vanishing at both ends, ordered by
/// frequency: `sin(j pi s)` for every `j`, and `1 - cos(j pi s)` for even `j`.
fn basis(modes: usize, n: usize) -> Vec<Vec<f64>> {
    let pi = std::f64::consts::PI;
    let mut out = Vec::new();
    for j in 1..=modes {
        let f = j as f64 * pi;
        out.push((0..=n).map(|k| (f * k as f64 / n as f64).sin()).collect());
        if j % 2 == 0 {
            out.push((0..=n).map(|k| 1.0 - (f * k as f64 / n as f64).cos()).collect());
        }
    }
    out
}

/// Basis index of `sin(j pi s)` / `1 - cos(j pi s)`.
fn sin_index(j: usize) -> usize {
    j - 1 + (j - 1) / 2
}

fn cos_index(j: usize) -> usize {
    sin_index(j) + 1
}

/// Weighted length functional on `p`-relative polygons.
struct Problem<'a> {
    p: Point,
    target: Point,
    weight: Option<&'a dyn Weight>,
    gl: GaussLegendre,
    n: usize,
}

impl Problem<'_> {
    fn chord(&self) -> [f64; 2] {
        [self.target.x, self.target.y]
    }

    fn offsets(&self, table: &[Vec<f64>], coef: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let mut w = vec![[0.0; 2]; self.n + 1];
        for (b, a) in table.iter().zip(coef) {
            if a[0] == 0.0 && a[1] == 0.0 {
                continue;
            }
            for (wk, bk) in w.iter_mut().zip(b) {
                wk[0] += a[0] * bk;
                wk[1] += a[1] * bk;
            }
        }
        w
    }

    /// Vertices `z_k = c k/n + alpha w_k`; `alpha` solves the height constraint
    /// when possible and otherwise minimizes the defect.
    fn realize(&self, w: &[[f64; 2]]) -> (Vec<[f64; 2]>, f64) {
        let n = w.len() - 1;
        let c = self.chord();
        let s = |k: usize| k as f64 / n as f64;
        let (mut a1, mut a2) = (0.0, 0.0);
        for k in 0..n {
            a1 += 2.0 * (s(k + 1) * cross(c, w[k]) + s(k) * cross(w[k + 1], c));
            a2 += 2.0 * cross(w[k + 1], w[k]);
        }
        let target = self.target.t;
        let mut cands: Vec<f64> = Vec::with_capacity(2);
        if a2.abs() > 1e-300 {
            let disc = a1 * a1 + 4.0 * a2 * target;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                cands.push((-a1 + sq) / (2.0 * a2));
                cands.push((-a1 - sq) / (2.0 * a2));
            } else {
                cands.push(-a1 / (2.0 * a2));
            }
        } else if a1.abs() > 1e-300 {
            cands.push(target / a1);
        } else {
            cands.push(0.0);
        }
        let mut best: Option<(f64, Vec<[f64; 2]>, f64)> = None;
        for alpha in cands {
            let z: Vec<[f64; 2]> = (0..=n).map(|k| [c[0] * s(k) + alpha * w[k][0], c[1] * s(k) + alpha * w[k][1]]).collect();
            let defect = target - (a1 * alpha + a2 * alpha * alpha);
            let cost = self.cost(&z, defect);
            if best.as_ref().map_or(true, |b| cost < b.0) {
                best = Some((cost, z, defect));
            }
        }
        let (_, z, d) = best.expect("at least one candidate");
        (z, d)
    }

    fn cost(&self, z: &[[f64; 2]], defect: f64) -> f64 {
        let loop_len = (std::f64::consts::PI * defect.abs()).sqrt();
        match self.weight {
            None => z.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).sum::<f64>() + loop_len,
            Some(om) => {
                let mut t = 0.0;
                let mut total = 0.0;
                for w in z.windows(2) {
                    let dt = 2.0 * cross(w[1], w[0]);
                    let len = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
                    let mut acc = 0.0;
                    for (s, ws) in self.gl.on(0.0, 1.0) {
                        let q = Point::new(w[0][0] + s * (w[1][0] - w[0][0]), w[0][1] + s * (w[1][1] - w[0][1]), t + s * dt);
                        acc += ws * om.fourth_root(self.p * q);
                    }
                    total += acc * len;
                    t += dt;
                }
                if loop_len > 0.0 {
                    let last = z[z.len() - 1];
                    total += loop_len * om.fourth_root(self.p * Point::new(last[0], last[1], t));
                }
                total
            }
        }
    }

    fn objective(&self, table: &[Vec<f64>], coef: &[[f64; 2]]) -> f64 {
        let (z, d) = self.realize(&self.offsets(table, coef));
        self.cost(&z, d)
    }

    /// Compass search on the basis coefficients. Only directions matter
    /// (`alpha` absorbs scale), so steps are relative to the largest one.
    fn pattern_search(&self, table: &[Vec<f64>], coef: &mut [[f64; 2]], tol: f64) -> f64 {
        let mut best = self.objective(table, coef);
        let scale = coef.iter().map(|a| a[0].hypot(a[1])).fold(0.0, f64::max).max(1e-300);
        let mut step = 0.25 * scale;
        let mut sweeps = 0usize;
        while step > tol * scale && sweeps < 10_000 {
            sweeps += 1;
            let mut improved = false;
            for b in 0..coef.len() {
                for a in 0..2 {
                    for dir in [1.0, -1.0] {
                        let old = coef[b][a];
                        coef[b][a] = old + dir * step;
                        let v = self.objective(table, coef);
                        if v < best {
                            best = v;
                            improved = true;
                            break;
                        }
                        coef[b][a] = old;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best
    }
}

/// Starting coefficients: arcs bulging off the chord, or circles when the
/// endpoints share a vertical line.
fn starts(chord: [f64; 2], height: f64, nb: usize, count: usize) -> Vec<Vec<[f64; 2]>> {
    let len = chord[0].hypot(chord[1]);
    let mut out = Vec::new();
    if len > 1e-12 * height.abs().sqrt() {
        let u = [chord[0] / len, chord[1] / len];
        let perp = [-u[1], u[0]];
        let shapes: [(f64, f64); 4] = [(1.0, 0.0), (1.0, 0.35), (1.0, -0.35), (0.6, 0.6)];
        for (a, b) in shapes.iter().take(count.max(1)) {
            let mut c = vec![[0.0; 2]; nb];
            c[sin_index(1)] = [a * perp[0], a * perp[1]];
            c[sin_index(2)] = [b * u[0], b * u[1]];
            out.push(c);
        }
    } else {
        for a in [1.0, 2.0, 0.5, 1.5].iter().take(count.max(1)) {
            let mut c = vec![[0.0; 2]; nb];
            c[cos_index(2)] = [-a, 0.0];
            c[sin_index(2)] = [0.0, 1.0 / a];
            out.push(c);
        }
    }
    out
}

fn optimize(p: Point, q: Point, weight: Option<&dyn Weight>, opts: &DistanceOptions) -> Result<DistanceResult> {
    if !(p.is_finite() && q.is_finite()) {
        return Err(Error::NonFinite(vec![p, q]));
    }
    if opts.vertices < 4 || opts.max_modes < 2 || !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::Config("distance options need vertices >= 4, max_modes >= 2, 0 < tol < 1".into()));
    }
    let target = p.inv() * q;
    let n = opts.vertices;
    let problem = Problem { p, target, weight, gl: GaussLegendre::new(opts.quadrature_nodes.max(1)), n };
    if target.gauge() == 0.0 {
        let curve = HorizontalCurve { start: p, vertices: vec![[0.0, 0.0], [0.0, 0.0]], loop_defect: 0.0 };
        return Ok(DistanceResult { value: 0.0, curve, restarts: vec![0.0] });
    }
    let full = basis(opts.max_modes, n);
    let mut levels = vec![2];
    while *levels.last().unwrap() < opts.max_modes {
        levels.push((2 * levels.last().unwrap()).min(opts.max_modes));
    }
    let nb = |m: usize| m + m / 2;
    let mut results = Vec::new();
    let mut best: Option<(f64, Vec<[f64; 2]>)> = None;
    for start in starts(problem.chord(), target.t, nb(2), opts.restarts) {
        let mut coef = start;
        let mut v = f64::INFINITY;
        for &m in &levels {
            coef.resize(nb(m), [0.0; 2]);
            v = problem.pattern_search(&full[..nb(m)], &mut coef, opts.tol);
        }
        results.push(v);
        if best.as_ref().map_or(true, |b| v < b.0) {
            best = Some((v, coef));
        }
    }
    let (value, coef) = best.expect("at least one start");
    if !value.is_finite() {
        return Err(Error::Optimizer(format!("non-finite length between {p:?} and {q:?}")));
    }
    let (z, defect) = problem.realize(&problem.offsets(&full[..coef.len()], &coef));
    Ok(DistanceResult { value, curve: HorizontalCurve { start: p, vertices: z, loop_defect: defect }, restarts: results })
}

/// Carnot-Carathéodory distance.
pub fn cc_distance(p: Point, q: Point, opts: &DistanceOptions) -> Result<DistanceResult> {
    optimize(p, q, None, opts)
}

/// `rho_omega(p, q) = inf int omega^{1/4} ds` over horizontal curves.
pub fn weighted_distance(p: Point, q: Point, omega: &dyn Weight, opts: &DistanceOptions) -> Result<DistanceResult> {
    optimize(p, q, Some(omega), opts)
}

/// `int_gamma omega^{1/4} ds` for a horizontal polygon.
pub fn omega_length(curve: &HorizontalCurve, omega: &dyn Weight, nodes: usize) -> f64 {
    let gl = GaussLegendre::new(nodes.max(1));
    let lifted = curve.lifted();
    let mut total = 0.0;
    for w in lifted.windows(2) {
        let len = (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
        let mut acc = 0.0;
        for (s, ws) in gl.on(0.0, 1.0) {
            let q = Point::new(w[0].x + s * (w[1].x - w[0].x), w[0].y + s * (w[1].y - w[0].y), w[0].t + s * (w[1].t - w[0].t));
            acc += ws * omega.fourth_root(curve.start * q);
        }
        total += acc * len;
    }
    if curve.loop_defect != 0.0 {
        total += curve.loop_length() * omega.fourth_root(curve.start * *lifted.last().unwrap());
    }
    total
}

/// `nu(B(c, r)) = int_{B(c, r)} omega` by Monte Carlo.
pub fn nu_ball(omega: &dyn Weight, c: Point, r: f64, cfg: &QuadratureConfig) -> f64 {
    let mut g = rng(cfg.rng_seed);
    let n = cfg.mc_samples;
    let mean = (0..n).map(|_| omega.value(sample_ball(&mut g, c, r))).sum::<f64>() / n as f64;
    UNIT_BALL_VOLUME * r.powi(4) * mean
}

/// David-Semmes quasi-distance `nu(B(p, d) u B(q, d))^{1/4}`, `d = d(p, q)`.
pub fn david_semmes(p: Point, q: Point, omega: &dyn Weight, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let d = p.dist(q);
    if d == 0.0 {
        return Ok(0.0);
    }
    let mut g = rng(cfg.rng_seed);
    let n = cfg.mc_samples;
    let vol = UNIT_BALL_VOLUME * d.powi(4);
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for _ in 0..n {
        s1 += omega.value(sample_ball(&mut g, p, d));
        let u = sample_ball(&mut g, q, d);
        if u.dist(p) >= d {
            s2 += omega.value(u);
        }
    }
    Ok((vol * (s1 + s2) / n as f64).powf(0.25))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityRow {
    pub p: [f64; 3],
    pub q: [f64; 3],
    pub rho_f: f64,
    pub rho_w: Option<f64>,
    pub d_w: f64,
    /// `rho_F / rho_omega`.
    pub rho_ratio: Option<f64>,
    /// `d_omega / rho_F`.
    pub ds_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilitySuite {
    pub rows: Vec<ComparabilityRow>,
    /// `max / min` of `d_omega / rho_F`.
    pub ds_spread: f64,
    /// Smallest `L` with `rho_omega / L <= rho_F <= L rho_omega` on the sample.
    pub empirical_l: Option<f64>,
    pub doubling: Vec<DoublingRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingRow {
    pub center: [f64; 3],
    pub radius: f64,
    /// `nu(B(c, 2r)) / nu(B(c, r))`.
    pub quotient: f64,
}

pub fn doubling_ladder(omega: &dyn Weight, centers: &[Point], radii: &[f64], cfg: &QuadratureConfig) -> Vec<DoublingRow> {
    let mut out = Vec::new();
    for c in centers {
        for &r in radii {
            let q = nu_ball(omega, *c, 2.0 * r, cfg) / nu_ball(omega, *c, r, cfg);
            out.push(DoublingRow { center: c.to_array(), radius: r, quotient: q });
        }
    }
    out
}

/// Distances for each pair: `rho_F = rho(F p, F q)`, optionally `rho_omega`,
/// and `d_omega`, with doubling quotients of `nu = omega dp` at the pair
/// midpoints' first points.
pub fn comparability_suite(
    f: &ComposedMap,
    omega: &dyn Weight,
    pairs: &[(Point, Point)],
    weighted: bool,
    opts: &DistanceOptions,
    cfg: &QuadratureConfig,
) -> Result<ComparabilitySuite> {
    let mut rows = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        let rho_f = cc_distance(f.apply(p)?, f.apply(q)?, opts)?.value;
        let rho_w = if weighted { Some(weighted_distance(p, q, omega, opts)?.value) } else { None };
        let d_w = david_semmes(p, q, omega, cfg)?;
        rows.push(ComparabilityRow {
            p: p.to_array(),
            q: q.to_array(),
            rho_f,
            rho_w,
            d_w,
            rho_ratio: rho_w.map(|r| rho_f / r),
            ds_ratio: d_w / rho_f,
        });
    }
    let spread = |v: &mut dyn Iterator<Item = f64>| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in v {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo, hi)
    };
    let (lo, hi) = spread(&mut rows.iter().map(|r| r.ds_ratio));
    let empirical_l = if weighted {
        let (a, b) = spread(&mut rows.iter().filter_map(|r| r.rho_ratio));
        Some(b.max(1.0 / a))
    } else {
        None
    };
    let centers: Vec<Point> = pairs.iter().take(4).map(|(p, _)| *p).collect();
    let doubling = doubling_ladder(omega, &centers, &[0.1, 0.2, 0.4, 0.8], cfg);
    Ok(ComparabilitySuite { rows, ds_spread: hi / lo, empirical_l, doubling })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast() -> DistanceOptions {
        DistanceOptions { vertices: 32, restarts: 2, ..Default::default() }
    }

    #[test]
    fn horizontal_points_are_straight_lines() {
        let r = cc_distance(Point::ORIGIN, Point::new(0.6, -0.8, 0.0), &fast()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn vertical_distance_is_sqrt_pi() {
        let r = cc_distance(Point::ORIGIN, Point::new(0.0, 0.0, 1.0), &fast()).unwrap();
        let exact = std::f64::consts::PI.sqrt();
        assert!((r.value / exact - 1.0).abs() < 5e-3, "{}", r.value);
        assert!(r.curve.end().euclid_dist(Point::new(0.0, 0.0, 1.0)) < 1e-9);
    }

    #[test]
    fn curves_are_horizontal_and_end_at_target() {
        let p = Point::new(0.3, 0.1, -0.2);
        let q = Point::new(-0.4, 0.5, 0.7);
        let r = cc_distance(p, q, &fast()).unwrap();
        assert!(r.curve.end().euclid_dist(q) < 1e-9);
        assert!(r.curve.horizontality_residual(4) < 1e-9);
        assert!((r.curve.length() - r.value).abs() < 1e-9);
        assert!(r.value >= p.dist(q) * 0.99);
    }

    #[test]
    fn constant_weight_sixteen_doubles_length() {
        let p = Point::new(0.1, 0.0, 0.0);
        let q = Point::new(0.5, 0.3, 0.4);
        let one = weighted_distance(p, q, &WeightField::constant(1.0), &fast()).unwrap();
        let sixteen = weighted_distance(p, q, &WeightField::constant(16.0), &fast()).unwrap();
        assert_eq!(sixteen.value, 2.0 * one.value);
    }

    #[test]
    fn vertical_segment_length_grows_like_sqrt_m() {
        let l = length_d(|s| Point::new(0.0, 0.0, s), 0.0, 1.0, &[1, 4, 16, 64]);
        for (m, v) in [1.0f64, 4.0, 16.0, 64.0].iter().zip(&l) {
            assert!((v - m.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn david_semmes_of_unit_weight_scales_linearly() {
        let cfg = QuadratureConfig { mc_samples: 20_000, ..Default::default() };
        let om = WeightField::constant(1.0);
        let a = david_semmes(Point::ORIGIN, Point::new(0.1, 0.0, 0.0), &om, &cfg).unwrap();
        let b = david_semmes(Point::ORIGIN, Point::new(0.2, 0.0, 0.0), &om, &cfg).unwrap();
        assert!((b / a - 2.0).abs() < 1e-9);
    }
}
