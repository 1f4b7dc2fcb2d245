//! Signed measures and their logarithmic potentials
//! `Lambda_mu(p) = -int log d(p, q) dmu(q)`.
//!
//! A [`Measure`] is a finite list of atoms plus an optional density sampled on
//! a regular Cartesian grid. Grid nodes sit at `origin + (i, j, k) * spacing`
//! and each node carries the cell volume `spacing_x * spacing_y * spacing_t`;
//! values are stored with `x` varying fastest.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::PointMap;
use crate::group::{Point, QuadratureConfig};
use crate::quadrature::{ball_bounding_box, exp_integral_e1};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: [f64; 3],
    pub mass: f64,
}

impl Atom {
    pub fn new(location: Point, mass: f64) -> Self {
        Atom { location: location.to_array(), mass }
    }

    pub fn point(&self) -> Point {
        Point::from_array(self.location)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    pub values: Vec<f64>,
}

impl DensityGrid {
    /// Grid of cell centres covering the box `lo..hi` with `n` cells per axis.
    pub fn covering(lo: [f64; 3], hi: [f64; 3], n: [usize; 3]) -> Self {
        let spacing = [0, 1, 2].map(|a| (hi[a] - lo[a]) / n[a] as f64);
        let origin = [0, 1, 2].map(|a| lo[a] + 0.5 * spacing[a]);
        DensityGrid { origin, spacing, dims: n, values: vec![0.0; n[0] * n[1] * n[2]] }
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    pub fn node(&self, idx: usize) -> Point {
        let i = idx % self.dims[0];
        let j = (idx / self.dims[0]) % self.dims[1];
        let k = idx / (self.dims[0] * self.dims[1]);
        Point::new(
            self.origin[0] + i as f64 * self.spacing[0],
            self.origin[1] + j as f64 * self.spacing[1],
            self.origin[2] + k as f64 * self.spacing[2],
        )
    }

    /// Nonzero nodes with their masses `value * cell_volume`.
    pub fn weighted_nodes(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        let vol = self.cell_volume();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(i, v)| (self.node(i), v * vol))
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() != self.len() {
            return Err(Error::Measure(format!(
                "density has {} values but dims {:?}",
                self.values.len(),
                self.dims
            )));
        }
        if self.spacing.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::Measure(format!("spacing must be positive, got {:?}", self.spacing)));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Measure("density contains non-finite values".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityGrid>,
}

impl Measure {
    pub fn atom(p: Point, mass: f64) -> Self {
        Measure { atoms: vec![Atom::new(p, mass)], density: None }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Measure = serde_json::from_str(s).map_err(|e| Error::Measure(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !(a.mass.is_finite() && a.location.iter().all(|c| c.is_finite())) {
                return Err(Error::Measure(format!("atom {a:?} is not finite")));
            }
        }
        if let Some(d) = &self.density {
            d.validate()?;
        }
        Ok(())
    }

    /// Point masses: atoms followed by weighted density nodes.
    pub fn point_masses(&self) -> Vec<(Point, f64)> {
        let mut out: Vec<(Point, f64)> = self.atoms.iter().map(|a| (a.point(), a.mass)).collect();
        if let Some(d) = &self.density {
            out.extend(d.weighted_nodes());
        }
        out
    }

    pub fn total_mass(&self) -> f64 {
        self.point_masses().iter().map(|(_, m)| m).sum()
    }

    pub fn scaled(&self, c: f64) -> Measure {
        let mut m = self.clone();
        m.atoms.iter_mut().for_each(|a| a.mass *= c);
        if let Some(d) = &mut m.density {
            d.values.iter_mut().for_each(|v| *v *= c);
        }
        m
    }
}

pub fn total_variation(mu: &Measure) -> f64 {
    mu.point_masses().iter().map(|(_, m)| m.abs()).sum()
}

/// Admissibility diagnostics: total variation and the log moment
/// `int log(e + ||q||) d|mu|`, plus cumulative log moments over dyadic shells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub total_variation: f64,
    pub log_moment: f64,
    pub shell_radii: Vec<f64>,
    pub partial_log_moments: Vec<f64>,
    pub diagnostic: String,
}

pub fn is_admissible(mu: &Measure, tol: f64) -> AdmissibilityReport {
    let masses = mu.point_masses();
    let finite = masses.iter().all(|(p, m)| p.is_finite() && m.is_finite());
    let tv: f64 = masses.iter().map(|(_, m)| m.abs()).sum();
    let moment = |(p, m): &(Point, f64)| m.abs() * (std::f64::consts::E + p.gauge()).ln();
    let lm: f64 = masses.iter().map(moment).sum();
    let rmax = masses.iter().map(|(p, _)| p.gauge()).fold(0.0, f64::max);
    let mut radii = Vec::new();
    let mut partial = Vec::new();
    let mut r = 1.0;
    loop {
        radii.push(r);
        partial.push(masses.iter().filter(|(p, _)| p.gauge() < r).map(moment).sum());
        if r > rmax {
            break;
        }
        r *= 2.0;
    }
    let admissible = finite && tv.is_finite() && lm.is_finite() && tv > tol;
    let diagnostic = if !finite {
        "measure has non-finite atoms or density".to_string()
    } else if tv <= tol {
        format!("total variation {tv:e} is below tolerance {tol:e}")
    } else {
        format!("total variation {tv:.6e}, log moment {lm:.6e}")
    };
    AdmissibilityReport {
        admissible,
        total_variation: tv,
        log_moment: lm,
        shell_radii: radii,
        partial_log_moments: partial,
        diagnostic,
    }
}

/// Verdict on a sequence of partial sums over dyadic shells: convergent when
/// the last increments decay geometrically.
pub fn partial_sums_converge(partial: &[f64]) -> bool {
    if partial.len() < 4 {
        return true;
    }
    let inc: Vec<f64> = partial.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let n = inc.len();
    let tail = &inc[n.saturating_sub(4)..];
    tail.windows(2).all(|w| w[1] <= 0.9 * w[0] || w[1] <= 1e-14 * partial[partial.len() - 1].abs())
}

/// Extended-real value of a logarithmic potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PotentialValue {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl PotentialValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PotentialValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// `Lambda_mu`, optionally precomposed with a map: `Lambda_mu(g(p))`.
#[derive(Clone)]
pub struct LogPotential {
    pub measure: Measure,
    pub precomposition: Option<Arc<dyn PointMap>>,
    nodes: Vec<(Point, f64)>,
    cell: Option<DensityGrid>,
}

impl std::fmt::Debug for LogPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LogPotential")
            .field("measure", &self.measure)
            .field("precomposed", &self.precomposition.is_some())
            .finish()
    }
}

const NEAR_SUBDIVISION: usize = 4;

impl LogPotential {
    pub fn new(measure: Measure) -> Result<Self> {
        measure.validate()?;
        let nodes = measure.density.as_ref().map(|d| d.weighted_nodes().collect()).unwrap_or_default();
        let cell = measure.density.clone();
        Ok(LogPotential { measure, precomposition: None, nodes, cell })
    }

    pub fn precomposed(mut self, g: Arc<dyn PointMap>) -> Self {
        self.precomposition = Some(g);
        self
    }

    /// `Lambda_mu(g(p))`, with `+-inf` at atoms according to the sign of the mass.
    pub fn eval(&self, p: Point) -> PotentialValue {
        let p = match &self.precomposition {
            Some(g) => g.apply(p),
            None => p,
        };
        self.eval_unmapped(p)
    }

    pub fn eval_unmapped(&self, p: Point) -> PotentialValue {
        let mut sum = 0.0;
        let mut pole = 0.0;
        for a in &self.measure.atoms {
            let d = p.dist(a.point());
            if d == 0.0 {
                pole += a.mass;
            } else {
                sum -= a.mass * d.ln();
            }
        }
        if pole > 0.0 {
            return PotentialValue::PlusInfinity;
        }
        if pole < 0.0 {
            return PotentialValue::MinusInfinity;
        }
        sum += self.density_part(p);
        PotentialValue::Finite(sum)
    }

    /// Density contribution; cells whose centre is within two cell diameters
    /// of `p` are integrated on a `4^3` sub-grid to resolve the logarithm.
    fn density_part(&self, p: Point) -> f64 {
        let Some(grid) = &self.cell else { return 0.0 };
        let h = grid.spacing;
        let near = 2.0 * h[0].max(h[1]).max(h[2].sqrt());
        let n = NEAR_SUBDIVISION;
        let mut sum = 0.0;
        for (q, m) in &self.nodes {
            let d = p.dist(*q);
            if d > near {
                sum -= m * d.ln();
                continue;
            }
            let sub_m = m / (n * n * n) as f64;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let off = |i: usize, s: f64| (i as f64 + 0.5) / n as f64 * s - 0.5 * s;
                        let qq = Point::new(q.x + off(a, h[0]), q.y + off(b, h[1]), q.t + off(c, h[2]));
                        let dd = p.dist(qq);
                        if dd > 0.0 {
                            sum -= sub_m * dd.ln();
                        }
                    }
                }
            }
        }
        sum
    }
}

/// Normalizing constant of the standard bump: `int_{B(1)} exp(-1/(1 - ||p||^4)) dp = pi^2/2 * E2(1)`.
pub fn bump_normalization() -> f64 {
    let e2 = (-1.0f64).exp() - exp_integral_e1(1.0);
    2.0 / (PI * PI * e2)
}

/// Standard bump `Psi(p) = C exp(-1/(1 - ||p||^4))` on `B(1)`, with unit integral.
pub fn bump(p: Point) -> f64 {
    let n = p.gauge4();
    if n >= 1.0 {
        0.0
    } else {
        bump_normalization() * (-1.0 / (1.0 - n)).exp()
    }
}

/// `Psi_k(p) = k^4 Psi(delta_k p)`, supported in `B(1/k)`.
pub fn bump_k(k: f64, p: Point) -> f64 {
    k.powi(4) * bump(p.scaled(k))
}

/// Mollify `mu` by left convolution with `Psi_k`, returning a density on a grid
/// of `cfg.grid_resolution` cells per axis covering the support. Each source
/// point is renormalized on the grid so that the discrete mass equals its mass.
pub fn regularize(mu: &Measure, k: f64, cfg: &QuadratureConfig) -> Result<Measure> {
    mu.validate()?;
    cfg.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Config(format!("mollification parameter must be positive, got {k}")));
    }
    let sources = mu.point_masses();
    if sources.is_empty() {
        return Ok(Measure::default());
    }
    let pad = mu.density.as_ref().map(|d| d.spacing.map(|s| 0.5 * s)).unwrap_or([0.0; 3]);
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for (q, _) in &sources {
        let (l, h) = ball_bounding_box(*q, 1.0 / k);
        for a in 0..3 {
            lo[a] = lo[a].min(l[a] - pad[a]);
            hi[a] = hi[a].max(h[a] + pad[a]);
        }
    }
    let n = cfg.grid_resolution;
    let mut grid = DensityGrid::covering(lo, hi, [n, n, n]);
    let vol = grid.cell_volume();
    let nodes: Vec<Point> = (0..grid.len()).map(|i| grid.node(i)).collect();
    let mut column = vec![0.0; grid.len()];
    for (q, m) in &sources {
        let qi = q.inv();
        let mut discrete = 0.0;
        for (c, p) in column.iter_mut().zip(&nodes) {
            *c = bump_k(k, qi * *p);
            discrete += *c * vol;
        }
        if discrete <= 0.0 {
            return Err(Error::Config(format!(
                "grid with {n} cells per axis does not resolve the bump of radius {} at {q:?}",
                1.0 / k
            )));
        }
        let scale = m / discrete;
        for (v, c) in grid.values.iter_mut().zip(&column) {
            *v += scale * c;
        }
    }
    Ok(Measure { atoms: Vec::new(), density: Some(grid) })
}

/// `mu` restricted to the open ball `B(k)`.
pub fn restrict(mu: &Measure, k: f64) -> Measure {
    let atoms = mu.atoms.iter().copied().filter(|a| a.point().gauge() < k).collect();
    let density = mu.density.as_ref().map(|d| {
        let mut d = d.clone();
        for i in 0..d.len() {
            if d.node(i).gauge() >= k {
                d.values[i] = 0.0;
            }
        }
        d
    });
    Measure { atoms, density }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{polar_integrate, UNIT_BALL_VOLUME};
    use proptest::prelude::*;

    #[test]
    fn bump_has_unit_integral() {
        let cfg = QuadratureConfig { grid_resolution: 24, ..Default::default() };
        let v = polar_integrate(bump, 1.0, &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        let v2 = polar_integrate(|p| bump_k(4.0, p), 1.0, &cfg).unwrap();
        assert!((v2 - 1.0).abs() < 1e-6, "{v2}");
    }

    #[test]
    fn atom_potential_values() {
        let lp = LogPotential::new(Measure::atom(Point::ORIGIN, 2.0)).unwrap();
        assert_eq!(lp.eval(Point::ORIGIN), PotentialValue::PlusInfinity);
        let v = lp.eval(Point::new(0.0, 0.0, 4.0)).finite().unwrap();
        assert!((v + 2.0 * 2f64.ln()).abs() < 1e-14);
        let neg = LogPotential::new(Measure::atom(Point::ORIGIN, -1.0)).unwrap();
        assert_eq!(neg.eval(Point::ORIGIN), PotentialValue::MinusInfinity);
    }

    #[test]
    fn empty_measure_is_not_admissible() {
        let r = is_admissible(&Measure::default(), 1e-12);
        assert!(!r.admissible);
        assert!(r.diagnostic.contains("below tolerance"));
    }

    #[test]
    fn regularized_atom_matches_far_field() {
        let cfg = QuadratureConfig { grid_resolution: 12, ..Default::default() };
        let mu = Measure::atom(Point::new(0.2, 0.0, 0.1), 0.5);
        let reg = regularize(&mu, 2.0, &cfg).unwrap();
        assert!((reg.total_mass() - 0.5).abs() < 1e-12);
        let a = LogPotential::new(mu).unwrap();
        let b = LogPotential::new(reg).unwrap();
        let p = Point::new(3.0, -2.0, 5.0);
        let (va, vb) = (a.eval(p).finite().unwrap(), b.eval(p).finite().unwrap());
        assert!((va - vb).abs() < 0.02 * va.abs(), "{va} {vb}");
    }

    #[test]
    fn restriction_drops_far_mass() {
        let mu = Measure {
            atoms: vec![Atom::new(Point::ORIGIN, 1.0), Atom::new(Point::new(5.0, 0.0, 0.0), 2.0)],
            density: None,
        };
        assert_eq!(restrict(&mu, 3.0).total_mass(), 1.0);
    }

    #[test]
    fn shell_diagnostics_separate_decay_rates() {
        // Radial density ~ r^{-a}: shell masses ~ 2^{k(4 - a)}.
        let sums = |a: f64| {
            let mut s = 0.0;
            (0..20)
                .map(|k| {
                    let r = 2f64.powi(k);
                    s += r.powf(4.0 - a) * (r.ln() + 1.0);
                    s
                })
                .collect::<Vec<f64>>()
        };
        assert!(partial_sums_converge(&sums(5.0)));
        assert!(!partial_sums_converge(&sums(4.0)));
        assert!(UNIT_BALL_VOLUME > 0.0);
    }

    proptest! {
        #[test]
        fn total_variation_dominates_mass(m1 in -3.0..3.0f64, m2 in -3.0..3.0f64) {
            let mu = Measure {
                atoms: vec![Atom::new(Point::ORIGIN, m1), Atom::new(Point::new(1.0, 0.0, 0.0), m2)],
                density: None,
            };
            prop_assert!(mu.total_mass().abs() <= total_variation(&mu) + 1e-15);
        }
    }
}
