//! Iterative construction of normalized quasiconformal maps `f_m`.
//!
//! Starting from `f_{m,0} = id`, step `j` builds the potential for
//! `F_j = g o f_{j-1}^{-1}`, flows for time `1/m` (`h_j`) and renormalizes
//! with `delta_{1/r_j}` so that `||f_j(p0)|| = 1`. Then
//! `J_{f_m} = e^{c_m} prod_j J_{h_j}(f_{j-1})` with `c_m = -4 sum log r_j`.
//!
//! Each step's potential is tabulated on a grid and interpolated with a cubic
//! spline; `log J_{F_j}` is tabulated on a second grid and advanced by
//! `log J_{F_{j+1}}(u) = log J_{F_j}(w) + log J_{h_j^{-1}}(delta_{r_j} u) + 4 log r_j`
//! with `w = h_j^{-1}(delta_{r_j} u)`. Lookups outside a grid are clamped.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construct::{tilde_phi_from_preimage, xi0_radial, XiRule};
use crate::contact::{ContactField, PotentialField};
use crate::error::{Error, Result};
use crate::flow::{dilatation, ComposedMap, FlowMap, Letter};
use crate::grid::{Grid3, SplineField, TabulatedPotential, TrilinearField};
use crate::group::Point;
use crate::potential::{LogPotential, Measure};
use crate::quadrature::{ball_bounding_box, exp_integral_e1, quasi_random_ball, sphere_grid, GaussLegendre};

/// Box of `B(radius)` sampled with `nodes` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radius: f64,
    pub nodes: usize,
}

impl GridSpec {
    pub fn grid(&self) -> Grid3 {
        let (lo, hi) = ball_bounding_box(Point::ORIGIN, self.radius);
        Grid3::spanning(lo, hi, [self.nodes; 3])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IterationConfig {
    pub m: usize,
    pub p0: [f64; 3],
    pub k_max: f64,
    pub eps_prime: f64,
    pub potential_grid: GridSpec,
    pub jacobian_grid: GridSpec,
    pub steps_per_unit_time: usize,
    /// Radial nodes per panel, longitudes and latitudes of the `xi_0` rule.
    pub xi_rule: [usize; 3],
    /// Points in `B(1)` at which each step's dilatation is sampled.
    pub dilatation_points: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            m: 2,
            p0: [1.0, 0.0, 0.0],
            k_max: 2.0,
            eps_prime: 0.1,
            potential_grid: GridSpec { radius: 3.0, nodes: 31 },
            jacobian_grid: GridSpec { radius: 4.5, nodes: 37 },
            steps_per_unit_time: 64,
            xi_rule: [2, 6, 3],
            dilatation_points: 4,
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("m must be positive".into()));
        }
        let p0 = Point::from_array(self.p0);
        if (p0.gauge() - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(format!("||p0|| = {} must be 1", p0.gauge())));
        }
        if self.potential_grid.nodes < 4 || self.jacobian_grid.nodes < 2 {
            return Err(Error::Config("grids need at least 4 and 2 nodes per axis".into()));
        }
        if self.steps_per_unit_time == 0 {
            return Err(Error::Config("steps_per_unit_time must be positive".into()));
        }
        budget_epsilon(1.0, 1.0, self.k_max)
            .and_then(|eps| {
                if self.eps_prime < eps {
                    Ok(())
                } else {
                    Err(Error::BudgetInfeasible { eps_prime: self.eps_prime, eps })
                }
            })
    }

    fn rule(&self) -> XiRule {
        XiRule::product(self.xi_rule[0], self.xi_rule[1], self.xi_rule[2])
    }
}

/// Per-step diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub j: usize,
    pub r: f64,
    pub c: [f64; 3],
    /// Largest sampled metric dilatation of `h_j`.
    pub k_hat: f64,
    /// `|v_j(0)|`.
    pub v0_norm: f64,
    /// `||f_j(p0)||`.
    pub p0_gauge: f64,
}

pub struct IterationResult {
    pub m: usize,
    pub steps: Vec<StepRecord>,
    /// `f_m` as the word `h_1, delta_{1/r_1}, ..., h_m, delta_{1/r_m}`.
    pub word: ComposedMap,
    pub c_m: f64,
    pub fields: Vec<Arc<ContactField>>,
}

fn ensure_normalized(g: &ComposedMap, p0: Point) -> Result<()> {
    let g0 = g.apply(Point::ORIGIN)?;
    if g0.gauge() > 1e-6 {
        return Err(Error::NotNormalized(format!("g(0) = {g0:?}")));
    }
    let gp = g.apply(p0)?.gauge();
    if (gp - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(format!("||g(p0)|| = {gp}")));
    }
    Ok(())
}

pub fn iterate(g: &ComposedMap, psi: &Measure, cfg: &IterationConfig) -> Result<IterationResult> {
    cfg.validate()?;
    psi.validate()?;
    let p0 = Point::from_array(cfg.p0);
    ensure_normalized(g, p0)?;
    let rule = cfg.rule();
    let pgrid = cfg.potential_grid.grid();
    let jgrid = cfg.jacobian_grid.grid();
    let identity = g.letters.is_empty();
    let mut log_j = TrilinearField::tabulate(jgrid, |u| if identity { 0.0 } else { g.log_jacobian(u).unwrap_or(0.0) });
    let mut sources: Vec<(Point, f64)> = psi
        .point_masses()
        .into_iter()
        .map(|(q, mass)| Ok((g.apply_inverse(q)?, mass)))
        .collect::<Result<_>>()?;
    let steps = (cfg.steps_per_unit_time / cfg.m).max(1);
    let mut word = ComposedMap::identity();
    let mut records = Vec::with_capacity(cfg.m);
    let mut fields = Vec::with_capacity(cfg.m);
    let mut current = p0;
    let mut sum_log_r = 0.0;
    for j in 1..=cfg.m {
        let phi1 = SplineField::tabulate(pgrid, |p| {
            sources.iter().map(|(pre, mass)| mass * tilde_phi_from_preimage(&log_j, p, *pre, &rule)).sum()
        });
        let (f0, grad0) = phi1.value_gradient(Point::ORIGIN);
        // Frame derivatives at the origin coincide with Cartesian partials.
        let c = [f0, -0.25 * grad0[1], 0.25 * grad0[0]];
        let phi = SplineField::tabulate(pgrid, |p| phi1.value(p) - crate::construct::phi2(c, p));
        let field = Arc::new(ContactField::new(PotentialField::from_arc(
            Arc::new(TabulatedPotential { spline: phi, label: format!("step {j}") }),
            1e-4,
        )));
        let v0 = field.eval(Point::ORIGIN);
        let h = FlowMap::new(field.clone(), 1.0 / cfg.m as f64).with_steps(steps);
        let moved = h.apply(current)?;
        let r = moved.gauge();
        current = moved.scaled(1.0 / r);
        sum_log_r += r.ln();

        let h_inv = h.inverse();
        log_j = TrilinearField::tabulate(jgrid, |u| {
            let a = u.scaled(r);
            match h_inv.apply_with_log_jacobian(a) {
                Ok((w, lj)) => log_j.value(w) + lj + 4.0 * r.ln(),
                Err(_) => log_j.value(u),
            }
        });
        for (pre, _) in sources.iter_mut() {
            *pre = h.apply(*pre)?.scaled(1.0 / r);
        }

        let k_hat = step_dilatation(&h, cfg.dilatation_points)?;
        records.push(StepRecord {
            j,
            r,
            c,
            k_hat,
            v0_norm: (v0[0] * v0[0] + v0[1] * v0[1] + v0[2] * v0[2]).sqrt(),
            p0_gauge: current.gauge(),
        });
        word = word.then(Letter::Flow(h)).then(Letter::Dilation(1.0 / r));
        fields.push(field);
    }
    Ok(IterationResult { m: cfg.m, steps: records, word, c_m: -4.0 * sum_log_r, fields })
}

fn step_dilatation(h: &FlowMap, points: usize) -> Result<f64> {
    let w = ComposedMap::new(vec![Letter::Flow(h.clone())]);
    let mut k = 1.0f64;
    for p in quasi_random_ball(Point::ORIGIN, 1.0, points, &[], 0.0) {
        k = k.max(dilatation(&w, p, &[0.02, 0.01], 12, 6)?.estimate);
    }
    Ok(k)
}

/// Per-point ratio `J_{f_m} e^{-c_m} / e^{2 Lambda_psi(g(p))}` normalized by
/// its geometric mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub points: Vec<[f64; 3]>,
    pub ratios: Vec<f64>,
    pub spread: f64,
    pub geometric_mean: f64,
}

pub fn comparability_report(
    result: &IterationResult,
    g: &ComposedMap,
    psi: &Measure,
    points: &[Point],
) -> Result<ComparabilityReport> {
    let lp = LogPotential::new(psi.clone())?;
    let mut logs = Vec::with_capacity(points.len());
    for &p in points {
        let lj = result.word.log_jacobian(p)?;
        let lam = lp
            .eval_unmapped(g.apply(p)?)
            .finite()
            .ok_or_else(|| Error::NonFinite(vec![p]))?;
        logs.push(lj - result.c_m - 2.0 * lam);
    }
    let mean = logs.iter().sum::<f64>() / logs.len().max(1) as f64;
    let ratios: Vec<f64> = logs.iter().map(|l| (l - mean).exp()).collect();
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ComparabilityReport {
        points: points.iter().map(|p| p.to_array()).collect(),
        ratios,
        spread: hi / lo,
        geometric_mean: mean.exp(),
    })
}

/// Default report grid: quasi-random points of `B(2)` away from the atoms.
pub fn report_points(n: usize, atoms: &[Point]) -> Vec<Point> {
    quasi_random_ball(Point::ORIGIN, 2.0, n, atoms, 0.05)
}

/// `int xi J_{f_m}` with `xi(p) = xi0_radial(||p|| / 2)`, by a product rule.
pub fn weak_jacobian_integral(word: &ComposedMap) -> Result<f64> {
    let sphere = sphere_grid(10, 5);
    let mut total = 0.0;
    for (a, b, n) in [(0.0, 0.5, 4), (0.5, 1.0, 24)] {
        for (r, wr) in GaussLegendre::new(n).on(a, b) {
            let radial = wr * r * r * r * xi0_radial(0.5 * r);
            for (q, wq) in &sphere {
                total += radial * wq * word.log_jacobian(q.scaled(r))?.exp();
            }
        }
    }
    Ok(total)
}

/// `eps = int_0^inf 1 / G = 3 / (2 A1) E1(A2 K^{2/3})` for
/// `G(r) = A1 exp(A2 K^{2/3} e^{2r/3})`.
pub fn budget_epsilon(a1: f64, a2: f64, k: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0 && k >= 1.0) {
        return Err(Error::Config(format!("budget needs A1, A2 > 0 and K >= 1, got {a1}, {a2}, {k}")));
    }
    Ok(1.5 / a1 * exp_integral_e1(a2 * k.powf(2.0 / 3.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilatationBudget {
    pub epsilon: f64,
    pub phi0_at_1: f64,
    /// `exp(Phi_0(1))`.
    pub bound: f64,
}

/// Solve `Phi_0' = eps' G(Phi_0)`, `Phi_0(0) = 0` on `[0, 1]` with RK4.
pub fn dilatation_budget(a1: f64, a2: f64, k: f64, eps_prime: f64) -> Result<DilatationBudget> {
    let eps = budget_epsilon(a1, a2, k)?;
    if !(eps_prime > 0.0 && eps_prime < eps) {
        return Err(Error::BudgetInfeasible { eps_prime, eps });
    }
    let a = a2 * k.powf(2.0 / 3.0);
    let rhs = |phi: f64| eps_prime * a1 * (a * (2.0 * phi / 3.0).exp()).exp();
    let n = 4000;
    let h = 1.0 / n as f64;
    let mut phi = 0.0;
    for _ in 0..n {
        let k1 = rhs(phi);
        let k2 = rhs(phi + 0.5 * h * k1);
        let k3 = rhs(phi + 0.5 * h * k2);
        let k4 = rhs(phi + h * k3);
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !phi.is_finite() {
            return Err(Error::BudgetInfeasible { eps_prime, eps });
        }
    }
    Ok(DilatationBudget { epsilon: eps, phi0_at_1: phi, bound: phi.exp() })
}

/// Conjugate `g` by a translation and a dilation so that the result fixes the
/// origin and maps `dir` (of unit gauge) to the unit sphere:
/// `h(p) = g(g^{-1}(0) * delta_rho(p))` with `||g(g^{-1}(0) * delta_rho(dir))|| = 1`.
pub fn normalize_map(g: &ComposedMap, dir: Point) -> Result<(ComposedMap, Point)> {
    let dir = dir.scaled(1.0 / dir.gauge());
    let a = g.apply_inverse(Point::ORIGIN)?;
    let gauge_at = |log_rho: f64| -> Result<f64> { Ok(g.apply(a * dir.scaled(log_rho.exp()))?.gauge()) };
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let start = gauge_at(0.0)?;
    for _ in 0..60 {
        if start < 1.0 {
            hi += 0.5;
            if gauge_at(hi).map_or(true, |v| v >= 1.0) {
                break;
            }
            lo = hi;
        } else {
            lo -= 0.5;
            if gauge_at(lo)? <= 1.0 {
                break;
            }
            hi = lo;
        }
    }
    if lo == hi {
        return Err(Error::NotNormalized("no radius maps the ray to the unit sphere".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gauge_at(mid).map_or(false, |v| v < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = (0.5 * (lo + hi)).exp();
    let h = ComposedMap::new(vec![Letter::Dilation(rho), Letter::Translation(a)]).compose(g);
    Ok((h, dir))
}
