//! Invariant suite. Each check belongs to a module tag (`group`, `contact`,
//! `flow`); `--filter` selects a tag or a single check name.

use std::f64::consts::PI;
use std::sync::Arc;

use heisenberg_qc::contact::{strain, ConstantPotential, ContactField, GaussianBump, PotentialField, Region, TranslationPotential};
use heisenberg_qc::flow::{jacobian_triple, ComposedMap, FlowMap, Letter};
use heisenberg_qc::group::{dilate, hderiv, Direction};
use heisenberg_qc::quadrature::{
    adaptive_integrate, cartesian_integrate_whole_space, polar_integrate, quasi_random_ball, rng, UNIT_BALL_VOLUME,
};
use heisenberg_qc::{Point, QuadratureConfig};
use rand::Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::Output;
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed error.
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub filter: Option<String>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type CheckFn = fn(&RunConfig) -> Result<(f64, f64), CliError>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("group.associativity", associativity),
    ("group.inverse", inverse),
    ("group.triangle", triangle),
    ("group.left_invariance", left_invariance),
    ("group.homogeneity", homogeneity),
    ("group.bracket", bracket),
    ("group.ball_volume", ball_volume),
    ("group.polar_vs_cartesian", polar_vs_cartesian),
    ("contact.strain_identity", strain_identity),
    ("flow.constant", flow_constant),
    ("flow.translation", flow_translation),
    ("flow.round_trip", flow_round_trip),
    ("flow.jacobian_triple", flow_jacobian_triple),
];

pub fn matches(filter: Option<&str>, name: &str) -> bool {
    match filter {
        None => true,
        Some(f) => name == f || name.strip_prefix(f).is_some_and(|rest| rest.starts_with('.')),
    }
}

pub fn run(cfg: &RunConfig, filter: Option<&str>, out: &mut Output) -> Result<bool, CliError> {
    let selected: Vec<_> = CHECKS.iter().filter(|(n, _)| matches(filter, n)).collect();
    if selected.is_empty() {
        return Err(CliError::Usage(format!("--filter {} matches no checks", filter.unwrap_or_default())));
    }
    let mut checks = Vec::with_capacity(selected.len());
    for (name, f) in selected {
        let (value, tolerance) = f(cfg)?;
        let passed = value <= tolerance;
        eprintln!("{} {name}: {value:.3e} (tol {tolerance:.1e})", if passed { "ok  " } else { "FAIL" });
        checks.push(Check { name: name.to_string(), passed, value, tolerance });
    }
    let passed = checks.iter().all(|c| c.passed);
    out.json("verify_report.json", &VerifyReport { filter: filter.map(str::to_string), passed, checks })?;
    Ok(passed)
}

fn random_points(cfg: &RunConfig, salt: u64, n: usize) -> Vec<Point> {
    let mut r = rng(cfg.seed ^ salt);
    (0..n).map(|_| Point::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0), r.gen_range(-25.0..25.0))).collect()
}

fn rel(a: Point, b: Point) -> f64 {
    let scale = 1.0 + b.x.abs().max(b.y.abs()).max(b.t.abs());
    a.euclid_dist(b) / scale
}

fn associativity(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let p = random_points(cfg, 1, 3 * cfg.verify.group_cases);
    let worst = p.chunks(3).map(|c| rel((c[0] * c[1]) * c[2], c[0] * (c[1] * c[2]))).fold(0.0, f64::max);
    Ok((worst, 1e-10))
}

fn inverse(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let p = random_points(cfg, 2, cfg.verify.group_cases);
    let worst = p.iter().map(|a| rel(*a * a.inv(), Point::ORIGIN).max(rel(a.inv() * *a, Point::ORIGIN))).fold(0.0, f64::max);
    Ok((worst, 1e-10))
}

fn triangle(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let p = random_points(cfg, 3, 2 * cfg.verify.group_cases);
    let worst = p
        .chunks(2)
        .map(|c| ((c[0] * c[1]).gauge() - c[0].gauge() - c[1].gauge()) / (c[0].gauge() + c[1].gauge()).max(1e-300))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    Ok((worst, 1e-10))
}

fn left_invariance(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let p = random_points(cfg, 4, 3 * cfg.verify.group_cases);
    let worst = p
        .chunks(3)
        .map(|c| {
            let d = c[0].dist(c[1]);
            ((c[2] * c[0]).dist(c[2] * c[1]) - d).abs() / d.max(1e-300)
        })
        .fold(0.0, f64::max);
    Ok((worst, 1e-10))
}

fn homogeneity(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let p = random_points(cfg, 5, 2 * cfg.verify.group_cases);
    let mut r = rng(cfg.seed ^ 6);
    let mut worst = 0.0f64;
    for c in p.chunks(2) {
        let s: f64 = r.gen_range(0.01..100.0);
        let d = c[0].dist(c[1]);
        let ds = dilate(s, c[0])?.dist(dilate(s, c[1])?);
        worst = worst.max((ds - s * d).abs() / (s * d).max(1e-300));
    }
    Ok((worst, 1e-10))
}

fn bracket(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let f = |p: Point| p.x * p.x * p.y - 0.5 * p.x * p.t + p.t * p.t + 0.3 * p.y * p.y * p.y;
    let h = 1e-3;
    let mut worst = 0.0f64;
    for p in quasi_random_ball(Point::ORIGIN, 1.0, cfg.verify.bracket_points, &[], 0.0) {
        let xy = hderiv(|q| hderiv(f, q, Direction::Y, h).unwrap_or(f64::NAN), p, Direction::X, h)?;
        let yx = hderiv(|q| hderiv(f, q, Direction::X, h).unwrap_or(f64::NAN), p, Direction::Y, h)?;
        let t = hderiv(f, p, Direction::T, h)?;
        worst = worst.max((xy - yx + 4.0 * t).abs());
    }
    Ok((worst, 1e-6))
}

fn ball_volume(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let v = polar_integrate(|p| if p.gauge() <= 1.0 { 1.0 } else { 0.0 }, 1.0, &cfg.quadrature)?;
    let oracle = 2.0 * PI * adaptive_integrate(|r| 2.0 * r * (1.0 - r.powi(4)).max(0.0).sqrt(), 0.0, 1.0, 1e-13, 1e-13);
    Ok(((v / oracle - 1.0).abs().max((oracle / UNIT_BALL_VOLUME - 1.0).abs()), 5e-3))
}

fn polar_vs_cartesian(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let f = |p: Point| (-p.gauge4()).exp();
    let polar = polar_integrate(f, f64::INFINITY, &cfg.quadrature)?;
    let cart = cartesian_integrate_whole_space(f, 1e-6);
    Ok(((polar / cart - 1.0).abs(), 1e-2))
}

fn strain_identity(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let g = GaussianBump { amplitude: 0.7, center: [0.1, -0.2, 0.1], width: 0.9 };
    let field = ContactField::from_potential(g, &cfg.quadrature);
    let rep = strain(&field, Region::Ball { center: [0.0; 3], radius: 1.5 }, cfg.verify.strain_resolution)?;
    Ok((rep.max_identity_residual, 1e-3))
}

fn sample_points(cfg: &RunConfig) -> Vec<Point> {
    quasi_random_ball(Point::ORIGIN, 1.5, cfg.verify.flow_points.max(1), &[], 0.0)
}

fn flow_constant(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let s = 0.7;
    let h = FlowMap::new(Arc::new(ContactField::from_potential(ConstantPotential(1.0), &cfg.quadrature)), s);
    let mut worst = 0.0f64;
    for p in sample_points(cfg) {
        worst = worst.max(h.apply(p)?.euclid_dist(p * Point::new(0.0, 0.0, s)));
    }
    Ok((worst, 1e-10))
}

fn flow_translation(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let pot = TranslationPotential { c: [0.4, -0.3, 0.5] };
    let gen = pot.generator();
    let s = 0.8;
    let h = FlowMap::new(Arc::new(ContactField::from_potential(pot, &cfg.quadrature)), s);
    let mut worst = 0.0f64;
    for p in sample_points(cfg) {
        worst = worst.max(h.apply(p)?.euclid_dist(Point::new(s * gen.x, s * gen.y, s * gen.t) * p));
    }
    Ok((worst, 1e-6))
}

fn gaussian_flow(q: &QuadratureConfig) -> FlowMap {
    let g = GaussianBump { amplitude: 0.6, center: [0.2, 0.1, -0.1], width: 0.8 };
    FlowMap::new(Arc::new(ContactField::new(PotentialField::new(g, q))), 0.5).with_steps(64)
}

fn flow_round_trip(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let h = gaussian_flow(&cfg.quadrature);
    let back = h.inverse();
    let mut worst = 0.0f64;
    for p in sample_points(cfg) {
        worst = worst.max(back.apply(h.apply(p)?)?.euclid_dist(p));
    }
    Ok((worst, 10.0 * h.step() * h.step()))
}

fn flow_jacobian_triple(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let w = ComposedMap::new(vec![Letter::Flow(gaussian_flow(&cfg.quadrature))]);
    let mut worst = 0.0f64;
    for p in sample_points(cfg) {
        worst = worst.max(jacobian_triple(&w, p, &cfg.quadrature)?.max_relative_spread());
    }
    Ok((worst, 0.03))
}
