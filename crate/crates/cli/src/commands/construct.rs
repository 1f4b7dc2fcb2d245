//! Potential construction for a map and a density, with its sanity checks.

use std::sync::Arc;

use heisenberg_qc::construct::{construct, XiRule};
use heisenberg_qc::contact::{ContactField, PotentialField, Region};
use heisenberg_qc::potential::LogPotential;
use heisenberg_qc::{Error, Point};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{num, Output};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct ConstructReport {
    pub c: [f64; 3],
    pub v0: [f64; 3],
    pub v0_norm: f64,
    pub sources: usize,
    /// Range of `div_H v - Lambda_psi o g` over the check grid.
    pub residual_min: f64,
    pub residual_max: f64,
    pub residual_sup: f64,
    pub worst_point: [f64; 3],
    pub grid_points: usize,
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<ConstructReport, CliError> {
    let s = &cfg.construct;
    let g = s.map.build(&cfg.quadrature)?;
    let psi = s.measure.build(&cfg.quadrature)?;
    let rule = XiRule::product(s.xi_rule[0], s.xi_rule[1], s.xi_rule[2]);
    let phi = construct(&g, &psi, rule, cfg.quadrature.fd_step)?;
    let c = phi.c;
    let field = ContactField::new(PotentialField::from_arc(Arc::new(phi), cfg.quadrature.fd_step));
    let v0 = field.eval(Point::ORIGIN);
    let lp = LogPotential::new(psi.clone())?;

    let mut rows = Vec::new();
    let (mut lo, mut hi, mut sup) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    let mut worst = Point::ORIGIN;
    for p in (Region::Ball { center: [0.0; 3], radius: 2.0 }).grid(s.check_resolution) {
        let div = field.divergence(p);
        let lam = lp.eval_unmapped(g.apply(p)?).finite().ok_or_else(|| Error::NonFinite(vec![p]))?;
        let r = div - lam;
        if !r.is_finite() {
            return Err(Error::NonFinite(vec![p]).into());
        }
        lo = lo.min(r);
        hi = hi.max(r);
        if r.abs() > sup {
            sup = r.abs();
            worst = p;
        }
        rows.push(vec![num(p.x), num(p.y), num(p.t), num(div), num(lam)]);
    }
    out.csv("construct_residual.csv", &["x", "y", "t", "div_h", "lambda_g"], &rows)?;
    let report = ConstructReport {
        c,
        v0,
        v0_norm: (v0[0] * v0[0] + v0[1] * v0[1] + v0[2] * v0[2]).sqrt(),
        sources: psi.point_masses().len(),
        residual_min: lo,
        residual_max: hi,
        residual_sup: sup,
        worst_point: worst.to_array(),
        grid_points: rows.len(),
    };
    out.json("construct_report.json", &report)?;
    Ok(report)
}
