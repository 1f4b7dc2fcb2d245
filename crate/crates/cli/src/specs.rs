//! Serializable descriptions of potentials, maps, measures and weights.

use std::sync::Arc;

use heisenberg_qc::contact::{
    ConstantPotential, ContactField, GaussianBump, Polynomial, Potential, PotentialField, RadialStretch,
    TranslationPotential,
};
use heisenberg_qc::flow::{ComposedMap, FlowMap, Letter};
use heisenberg_qc::iterate::GridSpec;
use heisenberg_qc::metric::WeightField;
use heisenberg_qc::potential::{regularize, Measure};
use heisenberg_qc::{Error, Point, QuadratureConfig, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    Constant { c: f64 },
    /// `c1 - 4 c2 y + 4 c3 x`, whose flow is left translation by `s (c2, c3, c1)`.
    Translation { c: [f64; 3] },
    /// `-2 t log ||p||`.
    RadialStretch,
    Gaussian { amplitude: f64, center: [f64; 3], width: f64 },
    /// Terms `(coefficient, [a, b, c])` for `coefficient x^a y^b t^c`.
    Polynomial { terms: Vec<(f64, [u32; 3])> },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Arc<dyn Potential>> {
        Ok(match self {
            PotentialSpec::Constant { c } => Arc::new(ConstantPotential(*c)),
            PotentialSpec::Translation { c } => Arc::new(TranslationPotential { c: *c }),
            PotentialSpec::RadialStretch => Arc::new(RadialStretch),
            PotentialSpec::Gaussian { amplitude, center, width } => {
                if !(*width > 0.0) {
                    return Err(Error::Config("gaussian width must be positive".into()));
                }
                Arc::new(GaussianBump { amplitude: *amplitude, center: *center, width: *width })
            }
            PotentialSpec::Polynomial { terms } => Arc::new(Polynomial { terms: terms.clone() }),
        })
    }

    pub fn field(&self, cfg: &QuadratureConfig) -> Result<Arc<ContactField>> {
        Ok(Arc::new(ContactField::new(PotentialField::from_arc(self.build()?, cfg.fd_step))))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    Identity,
    Dilation { r: f64 },
    Translation { by: [f64; 3] },
    Flow { potential: PotentialSpec, time: f64, steps: usize },
    /// Letters applied first to last.
    Word { letters: Vec<MapSpec> },
}

impl MapSpec {
    pub fn build(&self, cfg: &QuadratureConfig) -> Result<ComposedMap> {
        Ok(match self {
            MapSpec::Identity => ComposedMap::identity(),
            MapSpec::Dilation { r } => {
                if !(*r > 0.0 && r.is_finite()) {
                    return Err(Error::NonPositiveDilation(*r));
                }
                ComposedMap::new(vec![Letter::Dilation(*r)])
            }
            MapSpec::Translation { by } => ComposedMap::new(vec![Letter::Translation(Point::from_array(*by))]),
            MapSpec::Flow { potential, time, steps } => {
                if *steps == 0 || !time.is_finite() {
                    return Err(Error::Config("flow needs a finite time and at least one step".into()));
                }
                let h = FlowMap::new(potential.field(cfg)?, *time).with_steps(*steps);
                ComposedMap::new(vec![Letter::Flow(h)])
            }
            MapSpec::Word { letters } => {
                let mut w = ComposedMap::identity();
                for l in letters {
                    w = w.compose(&l.build(cfg)?);
                }
                w
            }
        })
    }
}

/// A measure, optionally replaced by its mollification at scale `1/k` sampled
/// with `resolution` nodes per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureSpec {
    pub measure: Measure,
    pub mollify: Option<f64>,
    pub resolution: usize,
}

impl Default for MeasureSpec {
    fn default() -> Self {
        MeasureSpec { measure: Measure::default(), mollify: None, resolution: 6 }
    }
}

impl MeasureSpec {
    pub fn build(&self, cfg: &QuadratureConfig) -> Result<Measure> {
        self.measure.validate()?;
        match self.mollify {
            Some(k) => regularize(&self.measure, k, &QuadratureConfig { grid_resolution: self.resolution, ..cfg.clone() }),
            None => Ok(self.measure.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    Constant { value: f64 },
    /// `omega = J_F` of the suite's map, tabulated when `grid` is given.
    MapJacobian { grid: Option<GridSpec> },
}

impl WeightSpec {
    pub fn build(&self, f: &ComposedMap) -> Result<WeightField> {
        match self {
            WeightSpec::Constant { value } => {
                if !(*value > 0.0 && value.is_finite()) {
                    return Err(Error::Config("constant weight must be positive".into()));
                }
                Ok(WeightField::constant(*value))
            }
            WeightSpec::MapJacobian { grid: Some(g) } => WeightField::from_map(f, g.radius, g.nodes),
            WeightSpec::MapJacobian { grid: None } => Ok(WeightField::from_map_exact(f.clone())),
        }
    }
}
