//! Potentials built from a map `g` and a density `psi`.
//!
//! With `xi_0` a radial bump equal to 1 on `B(1/4)` and supported in `B(1/2)`,
//! `lambda(g; p, q)^4 = int J_g(u) xi_0(delta_{1/d}(u^{-1} p)) du` where
//! `d = d(p, q)`. Substituting `u = p * delta_d(w)^{-1}` gives
//! `lambda^4 = d^4 int J_g(p * delta_d(w)^{-1}) xi_0(w) dw`, which is evaluated
//! with a fixed product rule in `w`. Then `eta(p, q) = -log lambda(p, g^{-1} q)`,
//! `phi~(p, q) = eta(p, q) (g^{-1}(q)^{-1} p)_3`,
//! `phi^1(p) = int phi~(p, q) psi(q) dq` and `phi = phi^1 - phi^2` where the
//! linear potential `phi^2` cancels `v_{phi^1}(0)`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::contact::{Mat2, Potential};
use crate::error::{Error, Result};
use crate::flow::ComposedMap;
use crate::grid::TrilinearField;
use crate::group::{hderiv, Direction, Point};
use crate::potential::Measure;
use crate::quadrature::{adaptive_integrate, rng, sphere_grid, sphere_point, GaussLegendre, SPHERE_MEASURE};

fn smooth_step_exp(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else {
        (-1.0 / z).exp()
    }
}

/// Radial profile of `xi_0`: 1 on `[0, 1/4]`, 0 on `[1/2, inf)`, C^inf between.
pub fn xi0_radial(r: f64) -> f64 {
    if r <= 0.25 {
        1.0
    } else if r >= 0.5 {
        0.0
    } else {
        let a = smooth_step_exp(0.5 - r);
        a / (a + smooth_step_exp(r - 0.25))
    }
}

pub fn xi0(p: Point) -> f64 {
    xi0_radial(p.gauge())
}

/// `int xi_0 = 2 pi^2 int_0^{1/2} xi0_radial(r) r^3 dr`.
pub fn xi0_integral() -> f64 {
    let tail = adaptive_integrate(|r| xi0_radial(r) * r * r * r, 0.25, 0.5, 1e-16, 1e-14);
    SPHERE_MEASURE * (0.25f64.powi(4) / 4.0 + tail)
}

/// Nodes and weights in `w` for `int f(w) xi_0(w) dw`; weights sum to `int xi_0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiRule {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl XiRule {
    /// Gauss-Legendre in `r` on `[0, 1/4]` and `[1/4, 1/2]` (`n_r` nodes each)
    /// times the sphere grid.
    pub fn product(n_r: usize, n_theta: usize, n_alpha: usize) -> Self {
        let gl = GaussLegendre::new(n_r);
        let sphere = sphere_grid(n_theta, n_alpha);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (a, b) in [(0.0, 0.25), (0.25, 0.5)] {
            for (r, wr) in gl.on(a, b) {
                let radial = wr * r * r * r * xi0_radial(r);
                for (q, wq) in &sphere {
                    nodes.push(q.scaled(r));
                    weights.push(radial * wq);
                }
            }
        }
        Self::normalized(nodes, weights)
    }

    /// Stratified Monte Carlo: one uniform sample per radial shell and
    /// angular cell.
    pub fn monte_carlo(shells: usize, per_shell: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for s in 0..shells {
            let (a, b) = (0.5 * s as f64 / shells as f64, 0.5 * (s + 1) as f64 / shells as f64);
            let shell_vol = SPHERE_MEASURE * (b.powi(4) - a.powi(4)) / 4.0;
            for _ in 0..per_shell {
                let u: f64 = r.gen();
                let rad = (a.powi(4) + u * (b.powi(4) - a.powi(4))).powf(0.25);
                let q = sphere_point(2.0 * PI * r.gen::<f64>(), PI * (r.gen::<f64>() - 0.5));
                nodes.push(q.scaled(rad));
                weights.push(shell_vol / per_shell as f64 * xi0_radial(rad));
            }
        }
        Self::normalized(nodes, weights)
    }

    fn normalized(nodes: Vec<Point>, weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        let scale = xi0_integral() / total;
        XiRule { nodes, weights: weights.into_iter().map(|w| w * scale).collect() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl Default for XiRule {
    fn default() -> Self {
        XiRule::product(4, 8, 4)
    }
}

/// Source of `log J_g`.
pub trait JacobianSource: Send + Sync {
    fn log_jacobian(&self, u: Point) -> f64;
}

/// `J = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnitJacobian;

impl JacobianSource for UnitJacobian {
    fn log_jacobian(&self, _u: Point) -> f64 {
        0.0
    }
}

impl JacobianSource for ComposedMap {
    fn log_jacobian(&self, u: Point) -> f64 {
        ComposedMap::log_jacobian(self, u).unwrap_or(f64::NAN)
    }
}

impl JacobianSource for TrilinearField {
    fn log_jacobian(&self, u: Point) -> f64 {
        self.value(u)
    }
}

/// `log lambda(g; p, q)`; `-inf` when `p = q`.
pub fn log_lambda(jac: &dyn JacobianSource, p: Point, q: Point, rule: &XiRule) -> f64 {
    let d = p.dist(q);
    if d == 0.0 {
        return f64::NEG_INFINITY;
    }
    let logs: Vec<f64> = rule.nodes.iter().map(|w| jac.log_jacobian(p * w.scaled(d).inv())).collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().zip(&rule.weights).map(|(l, w)| w * (l - m).exp()).sum();
    d.ln() + 0.25 * (m + s.ln())
}

pub fn lambda(jac: &dyn JacobianSource, p: Point, q: Point, rule: &XiRule) -> f64 {
    log_lambda(jac, p, q, rule).exp()
}

/// `eta(p, q) = -log lambda(g; p, g^{-1}(q))`.
pub fn eta(g: &ComposedMap, p: Point, q: Point, rule: &XiRule) -> Result<f64> {
    let pre = g.apply_inverse(q)?;
    if pre == p {
        return Err(Error::Pole);
    }
    Ok(-log_lambda(g, p, pre, rule))
}

/// `phi~(p, q)` from the preimage `g^{-1}(q)`; zero at the pole.
pub fn tilde_phi_from_preimage(jac: &dyn JacobianSource, p: Point, pre: Point, rule: &XiRule) -> f64 {
    if p == pre {
        return 0.0;
    }
    -log_lambda(jac, p, pre, rule) * (pre.inv() * p).t
}

pub fn tilde_phi(g: &ComposedMap, p: Point, q: Point, rule: &XiRule) -> Result<f64> {
    let pre = g.apply_inverse(q)?;
    Ok(tilde_phi_from_preimage(g, p, pre, rule))
}

/// `phi^1 = sum_i m_i phi~(., q_i)` over the point masses of `psi`, stored as
/// preimages `g^{-1}(q_i)`.
#[derive(Clone)]
pub struct Phi1 {
    pub jac: Arc<dyn JacobianSource>,
    pub sources: Vec<(Point, f64)>,
    pub rule: XiRule,
}

impl Phi1 {
    pub fn new(g: &ComposedMap, psi: &Measure, rule: XiRule) -> Result<Self> {
        let sources = psi
            .point_masses()
            .into_iter()
            .map(|(q, m)| Ok((g.apply_inverse(q)?, m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Phi1 { jac: Arc::new(g.clone()), sources, rule })
    }

    pub fn value(&self, p: Point) -> f64 {
        self.sources.iter().map(|(pre, m)| m * tilde_phi_from_preimage(self.jac.as_ref(), p, *pre, &self.rule)).sum()
    }
}

/// Linear potential `phi^2 = c1 - 4 c2 y + 4 c3 x`.
pub fn phi2(c: [f64; 3], p: Point) -> f64 {
    c[0] - 4.0 * c[1] * p.y + 4.0 * c[2] * p.x
}

/// `phi^1 - phi^2` with `c = v_{phi^1}(0)`; frame derivatives of `phi^1` by
/// group finite differences with a fixed step, so that `v_phi(0) = 0` holds
/// for the same stencil.
#[derive(Clone)]
pub struct ConstructedPotential {
    pub phi1: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    pub c: [f64; 3],
    pub fd_step: f64,
}

impl ConstructedPotential {
    pub fn assemble(phi1: Arc<dyn Fn(Point) -> f64 + Send + Sync>, fd_step: f64) -> Result<Self> {
        let f = |q: Point| phi1(q);
        let xf = hderiv(f, Point::ORIGIN, Direction::X, fd_step)?;
        let yf = hderiv(f, Point::ORIGIN, Direction::Y, fd_step)?;
        let c = [phi1(Point::ORIGIN), -0.25 * yf, 0.25 * xf];
        Ok(ConstructedPotential { phi1, c, fd_step })
    }

    fn phi1_gradient(&self, p: Point) -> [f64; 3] {
        let f = |q: Point| (self.phi1)(q);
        [Direction::X, Direction::Y, Direction::T].map(|d| hderiv(f, p, d, self.fd_step).unwrap_or(f64::NAN))
    }
}

impl Potential for ConstructedPotential {
    fn value(&self, p: Point) -> f64 {
        (self.phi1)(p) - phi2(self.c, p)
    }

    fn gradient(&self, p: Point) -> Option<[f64; 3]> {
        let g = self.phi1_gradient(p);
        Some([g[0] - 4.0 * self.c[2], g[1] + 4.0 * self.c[1], g[2]])
    }

    fn horizontal_hessian(&self, p: Point) -> Option<Mat2> {
        let h = self.fd_step.max(1e-3);
        let mut out = [[0.0; 2]; 2];
        for (i, di) in [Direction::X, Direction::Y].into_iter().enumerate() {
            for j in 0..2 {
                out[i][j] = hderiv(|q| self.phi1_gradient(q)[j], p, di, h).unwrap_or(f64::NAN);
            }
        }
        Some(out)
    }

    fn name(&self) -> String {
        "constructed".into()
    }
}

/// Build `phi = phi^1 - phi^2` for a word `g` and density `psi`.
pub fn construct(g: &ComposedMap, psi: &Measure, rule: XiRule, fd_step: f64) -> Result<ConstructedPotential> {
    let phi1 = Phi1::new(g, psi, rule)?;
    ConstructedPotential::assemble(Arc::new(move |p| phi1.value(p)), fd_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{ContactField, PotentialField};
    use crate::flow::Letter;

    #[test]
    fn xi0_profile_plateau_and_support() {
        assert_eq!(xi0_radial(0.1), 1.0);
        assert_eq!(xi0_radial(0.25), 1.0);
        assert_eq!(xi0_radial(0.5), 0.0);
        let mid = xi0_radial(0.375);
        assert!((mid - 0.5).abs() < 1e-12);
        // Plateau volume and full ball volume bracket the integral.
        let i = xi0_integral();
        assert!(i > SPHERE_MEASURE * 0.25f64.powi(4) / 4.0 && i < SPHERE_MEASURE * 0.5f64.powi(4) / 4.0);
    }

    #[test]
    fn identity_lambda_is_constant_multiple_of_distance() {
        let rule = XiRule::default();
        let c0 = xi0_integral().powf(0.25);
        let p = Point::new(0.3, -0.2, 0.7);
        let q = Point::new(-1.0, 0.5, 0.1);
        let l = lambda(&UnitJacobian, p, q, &rule);
        assert!((l / p.dist(q) - c0).abs() < 1e-12);
    }

    #[test]
    fn tilde_phi_sanity_value() {
        let rule = XiRule::default();
        let id = ComposedMap::identity();
        let v = tilde_phi(&id, Point::new(0.0, 0.0, 1.0), Point::ORIGIN, &rule).unwrap();
        assert!((v + xi0_integral().powf(0.25).ln()).abs() < 1e-12);
        assert_eq!(tilde_phi(&id, Point::ORIGIN, Point::ORIGIN, &rule).unwrap(), 0.0);
        assert!(matches!(eta(&id, Point::ORIGIN, Point::ORIGIN, &rule), Err(Error::Pole)));
    }

    #[test]
    fn dilation_scales_lambda() {
        let rule = XiRule::default();
        let g = ComposedMap::new(vec![Letter::Dilation(2.0)]);
        let p = Point::new(0.3, -0.2, 0.7);
        let q = Point::new(-1.0, 0.5, 0.1);
        let ratio = lambda(&g, p, q, &rule) / lambda(&UnitJacobian, p, q, &rule);
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_rule_integrates_xi0() {
        let r = XiRule::monte_carlo(8, 16, 3);
        assert!((r.weights.iter().sum::<f64>() - xi0_integral()).abs() < 1e-12);
        assert!(r.nodes.iter().all(|w| w.gauge() < 0.5));
    }

    #[test]
    fn constructed_field_vanishes_at_origin() {
        let psi = Measure {
            atoms: vec![
                crate::potential::Atom::new(Point::new(0.2, 0.1, -0.1), 0.03),
                crate::potential::Atom::new(Point::new(-0.1, 0.3, 0.2), 0.02),
            ],
            density: None,
        };
        let phi = construct(&ComposedMap::identity(), &psi, XiRule::default(), 1e-4).unwrap();
        let v = ContactField::new(PotentialField::from_arc(Arc::new(phi), 1e-4));
        let e = v.eval(Point::ORIGIN);
        assert!(e.iter().all(|c| c.abs() < 1e-12), "{e:?}");
    }
}
