//! Measure admissibility, logarithmic potential samples and the strain
//! report of a potential.

use heisenberg_qc::contact::strain;
use heisenberg_qc::potential::{is_admissible, AdmissibilityReport, LogPotential, Measure, PotentialValue};
use heisenberg_qc::quadrature::quasi_random_ball;
use heisenberg_qc::Point;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{num, Output};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct PotentialReport {
    pub measure: Measure,
    pub total_mass: f64,
    pub admissibility: AdmissibilityReport,
    pub infinite_samples: usize,
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let s = &cfg.potential;
    let field = s.potential.field(&cfg.quadrature)?;
    let rep = strain(&field, s.region, s.resolution)?;
    out.json("strain_report.json", &rep)?;

    let mu = s.measure.build(&cfg.quadrature)?;
    let admissibility = is_admissible(&mu, s.admissibility_tol);
    let lp = LogPotential::new(mu.clone())?;
    let mut rows = Vec::with_capacity(s.samples);
    let mut infinite = 0;
    for p in quasi_random_ball(Point::ORIGIN, 2.0, s.samples, &[], 0.0) {
        let v = match lp.eval(p) {
            PotentialValue::Finite(v) => num(v),
            PotentialValue::PlusInfinity => {
                infinite += 1;
                "inf".to_string()
            }
            PotentialValue::MinusInfinity => {
                infinite += 1;
                "-inf".to_string()
            }
        };
        rows.push(vec![num(p.x), num(p.y), num(p.t), v]);
    }
    out.csv("log_potential.csv", &["x", "y", "t", "lambda"], &rows)?;
    let report = PotentialReport { total_mass: mu.total_mass(), measure: mu, admissibility, infinite_samples: infinite };
    out.json("potential_report.json", &report)
}
