//! Comparability suite for a map and a weight.

use heisenberg_qc::metric::{comparability_suite, length_d, ComparabilitySuite};
use heisenberg_qc::quadrature::quasi_random_ball;
use heisenberg_qc::Point;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{num, Output};
use crate::CliError;

/// Minimum separation of a pair.
const MIN_PAIR_DISTANCE: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct LengthTrend {
    pub partitions: Vec<usize>,
    pub lengths: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub weight: String,
    pub pairs: usize,
    pub empirical_l: Option<f64>,
    pub ds_spread: f64,
    pub suite: ComparabilitySuite,
    /// `l_d` of the unit vertical segment.
    pub vertical_length: LengthTrend,
}

/// Consecutive quasi-random points of `B(2)` paired up, skipping close pairs.
pub fn pair_batch(n: usize) -> Vec<(Point, Point)> {
    let mut out = Vec::with_capacity(n);
    let mut k = 2 * n;
    while out.len() < n {
        out = quasi_random_ball(Point::ORIGIN, 2.0, k, &[], 0.0)
            .chunks(2)
            .map(|c| (c[0], c[1]))
            .filter(|(p, q)| p.dist(*q) >= MIN_PAIR_DISTANCE)
            .take(n)
            .collect();
        k += 2 * (n - out.len()).max(1);
    }
    out
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<MetricReport, CliError> {
    let s = &cfg.metric;
    let f = s.map.build(&cfg.quadrature)?;
    let omega = s.weight.build(&f)?;
    let pairs = pair_batch(s.pairs);
    let suite = comparability_suite(&f, &omega, &pairs, s.weighted, &s.distance, &cfg.quadrature)?;
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = suite
        .rows
        .iter()
        .map(|r| {
            let mut row: Vec<String> = r.p.iter().chain(&r.q).map(|v| num(*v)).collect();
            row.extend([num(r.rho_f), opt(r.rho_w), num(r.d_w), opt(r.rho_ratio), num(r.ds_ratio)]);
            row
        })
        .collect();
    out.csv(
        "comparability.csv",
        &["px", "py", "pt", "qx", "qy", "qt", "rho_f", "rho_w", "d_w", "rho_f_over_rho_w", "d_w_over_rho_f"],
        &rows,
    )?;
    let lengths = length_d(|s| Point::new(0.0, 0.0, s), 0.0, 1.0, &s.length_partitions);
    let report = MetricReport {
        weight: omega.provenance.clone(),
        pairs: pairs.len(),
        empirical_l: suite.empirical_l,
        ds_spread: suite.ds_spread,
        suite,
        vertical_length: LengthTrend { partitions: s.length_partitions.clone(), lengths },
    };
    out.json("metric_report.json", &report)?;
    Ok(report)
}
