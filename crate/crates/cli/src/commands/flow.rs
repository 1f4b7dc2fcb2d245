//! Trajectory dump and per-flow diagnostics.

use heisenberg_qc::contact::{strain, StrainReport};
use heisenberg_qc::flow::{det, dilatation, jacobian_triple, ComposedMap, FlowMap, JacobianTriple, Letter};
use heisenberg_qc::quadrature::quasi_random_ball;
use heisenberg_qc::Point;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{num, Output};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct DilatationSample {
    pub point: [f64; 3],
    pub estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub potential: String,
    pub time: f64,
    pub steps: usize,
    pub base_point: [f64; 3],
    pub end_point: [f64; 3],
    pub log_jacobian: f64,
    pub det_squared: f64,
    pub jacobian: JacobianTriple,
    pub strain: StrainReport,
    /// `exp(c |s|)` with `c` the strain supremum.
    pub dilatation_bound: f64,
    pub dilatation: Vec<DilatationSample>,
    pub round_trip_error: f64,
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let s = &cfg.flow;
    let field = s.potential.field(&cfg.quadrature)?;
    let h = FlowMap::new(field.clone(), s.time).with_steps(s.steps);
    let p = Point::from_array(s.base_point);

    let rows: Vec<Vec<String>> = h
        .trajectory(p)?
        .into_iter()
        .map(|r| [r.sigma, r.x, r.y, r.t, r.m11, r.m12, r.m21, r.m22].iter().map(|v| num(*v)).collect())
        .collect();
    out.csv("trajectory.csv", &["sigma", "x", "y", "t", "m11", "m12", "m21", "m22"], &rows)?;

    let sample = h.apply_with_differential(p)?;
    let word = ComposedMap::new(vec![Letter::Flow(h.clone())]);
    let jacobian = jacobian_triple(&word, p, &cfg.quadrature)?;
    let strain = strain(&field, s.strain_region, s.strain_resolution)?;
    let mut samples = Vec::new();
    for q in quasi_random_ball(Point::ORIGIN, 1.5, s.dilatation_points, &[Point::ORIGIN], 0.2) {
        let est = dilatation(&word, q, &[0.02, 0.01], 16, 8)?.estimate;
        samples.push(DilatationSample { point: q.to_array(), estimate: est });
    }
    let round_trip_error = h.inverse().apply(sample.point)?.euclid_dist(p);
    let d = det(sample.dh);
    let report = FlowReport {
        potential: s.potential.build()?.name(),
        time: s.time,
        steps: s.steps,
        base_point: s.base_point,
        end_point: sample.point.to_array(),
        log_jacobian: sample.log_jacobian,
        det_squared: d * d,
        jacobian,
        dilatation_bound: (strain.c * s.time.abs()).exp(),
        strain,
        dilatation: samples,
        round_trip_error,
    };
    out.json("flow_report.json", &report)
}
