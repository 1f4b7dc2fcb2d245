//! Iteration driver: per-step records, the Jacobian comparability ratios and
//! the dilatation budget.

use heisenberg_qc::contact::Region;
use heisenberg_qc::iterate::{
    comparability_report, dilatation_budget, iterate, report_points, weak_jacobian_integral, DilatationBudget, GridSpec,
    StepRecord,
};
use heisenberg_qc::Point;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{num, Output};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct IterationGridMeta {
    pub potential_grid: GridSpec,
    pub jacobian_grid: GridSpec,
    pub report_region: Region,
    pub report_points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationReport {
    pub m: usize,
    #[serde(rename = "K_steps")]
    pub k_steps: Vec<f64>,
    pub c_m: f64,
    pub spread: f64,
    pub grid_meta: IterationGridMeta,
    pub geometric_mean: f64,
    pub weak_jacobian_integral: f64,
    pub budget: DilatationBudget,
    pub steps: Vec<StepRecord>,
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<IterationReport, CliError> {
    let s = &cfg.iteration;
    let g = s.map.build(&cfg.quadrature)?;
    let psi = s.measure.build(&cfg.quadrature)?;
    let result = iterate(&g, &psi, &s.params)?;
    let atoms: Vec<Point> = s.measure.measure.atoms.iter().map(|a| a.point()).collect();
    let points = report_points(s.report_points, &atoms);
    let comp = comparability_report(&result, &g, &psi, &points)?;
    let rows: Vec<Vec<String>> =
        comp.points.iter().zip(&comp.ratios).map(|(p, r)| vec![num(p[0]), num(p[1]), num(p[2]), num(*r)]).collect();
    out.csv("iteration_ratios.csv", &["x", "y", "t", "ratio"], &rows)?;
    let report = IterationReport {
        m: result.m,
        k_steps: result.steps.iter().map(|r| r.k_hat).collect(),
        c_m: result.c_m,
        spread: comp.spread,
        grid_meta: IterationGridMeta {
            potential_grid: s.params.potential_grid,
            jacobian_grid: s.params.jacobian_grid,
            report_region: Region::Ball { center: [0.0; 3], radius: 2.0 },
            report_points: points.len(),
        },
        geometric_mean: comp.geometric_mean,
        weak_jacobian_integral: weak_jacobian_integral(&result.word)?,
        budget: dilatation_budget(s.a1, s.a2, s.params.k_max, s.params.eps_prime)?,
        steps: result.steps,
    };
    out.json("iteration_report.json", &report)?;
    Ok(report)
}
