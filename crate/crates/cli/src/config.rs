//! Run configuration, its validation and its content hash.

use heisenberg_qc::contact::Region;
use heisenberg_qc::iterate::IterationConfig;
use heisenberg_qc::metric::DistanceOptions;
use heisenberg_qc::potential::{Atom, Measure};
use heisenberg_qc::QuadratureConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::specs::{MapSpec, MeasureSpec, PotentialSpec, WeightSpec};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    /// `rng_seed` is overwritten by `seed`.
    pub quadrature: QuadratureConfig,
    pub verify: VerifySettings,
    pub flow: FlowSettings,
    pub potential: PotentialSettings,
    pub construct: ConstructSettings,
    pub iteration: IterationSettings,
    pub metric: MetricSettings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySettings {
    /// Random cases per group-law check.
    pub group_cases: usize,
    pub bracket_points: usize,
    pub strain_resolution: usize,
    pub flow_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSettings {
    pub potential: PotentialSpec,
    pub time: f64,
    pub steps: usize,
    pub base_point: [f64; 3],
    pub strain_region: Region,
    pub strain_resolution: usize,
    pub dilatation_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialSettings {
    pub potential: PotentialSpec,
    pub region: Region,
    pub resolution: usize,
    pub measure: MeasureSpec,
    pub admissibility_tol: f64,
    /// Quasi-random points of `B(2)` at which `Lambda_mu` is tabulated.
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstructSettings {
    pub map: MapSpec,
    pub measure: MeasureSpec,
    pub xi_rule: [usize; 3],
    /// Nodes per axis of the `B(2)` grid on which `div_H v - Lambda o g` is checked.
    pub check_resolution: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterationSettings {
    pub map: MapSpec,
    pub measure: MeasureSpec,
    pub params: IterationConfig,
    pub report_points: usize,
    /// Constants of the dilatation budget.
    pub a1: f64,
    pub a2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSettings {
    pub map: MapSpec,
    pub weight: WeightSpec,
    pub pairs: usize,
    /// Also compute `rho_omega` by weighted optimization.
    pub weighted: bool,
    pub distance: DistanceOptions,
    pub length_partitions: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            seed: QuadratureConfig::default().rng_seed,
            quadrature: QuadratureConfig::default(),
            verify: VerifySettings::default(),
            flow: FlowSettings::default(),
            potential: PotentialSettings::default(),
            construct: ConstructSettings::default(),
            iteration: IterationSettings::default(),
            metric: MetricSettings::default(),
        }
    }
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings { group_cases: 20_000, bracket_points: 200, strain_resolution: 8, flow_points: 4 }
    }
}

impl Default for FlowSettings {
    fn default() -> Self {
        FlowSettings {
            potential: PotentialSpec::RadialStretch,
            time: 1.0,
            steps: 256,
            base_point: [0.6, 0.2, 0.3],
            strain_region: Region::Annulus { center: [0.0; 3], inner: 0.5, outer: 2.0 },
            strain_resolution: 12,
            dilatation_points: 8,
        }
    }
}

fn mollified_atom(mass: f64) -> MeasureSpec {
    MeasureSpec { measure: Measure { atoms: vec![Atom { location: [0.5, 0.3, 0.2], mass }], density: None }, mollify: Some(2.0), resolution: 6 }
}

impl Default for PotentialSettings {
    fn default() -> Self {
        PotentialSettings {
            potential: PotentialSpec::Gaussian { amplitude: 0.5, center: [0.2, -0.1, 0.1], width: 0.8 },
            region: Region::Ball { center: [0.0; 3], radius: 1.5 },
            resolution: 12,
            measure: MeasureSpec {
                measure: Measure {
                    atoms: vec![Atom { location: [0.5, 0.3, 0.2], mass: 1.0 }, Atom { location: [-0.4, 0.1, -0.6], mass: -0.5 }],
                    density: None,
                },
                ..MeasureSpec::default()
            },
            admissibility_tol: 1e-3,
            samples: 200,
        }
    }
}

impl Default for ConstructSettings {
    fn default() -> Self {
        ConstructSettings { map: MapSpec::Identity, measure: mollified_atom(0.1), xi_rule: [4, 8, 4], check_resolution: 10 }
    }
}

impl Default for IterationSettings {
    fn default() -> Self {
        IterationSettings {
            map: MapSpec::Identity,
            measure: mollified_atom(0.05),
            params: IterationConfig::default(),
            report_points: 1000,
            a1: 1.0,
            a2: 1.0,
        }
    }
}

impl Default for MetricSettings {
    fn default() -> Self {
        MetricSettings {
            map: MapSpec::Identity,
            weight: WeightSpec::Constant { value: 1.0 },
            pairs: 40,
            weighted: true,
            distance: DistanceOptions { vertices: 32, restarts: 2, ..DistanceOptions::default() },
            length_partitions: vec![1, 2, 4, 8, 16, 32, 64],
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Applies the seed override and checks every section.
    pub fn finalize(mut self, seed: Option<u64>) -> Result<Self, CliError> {
        if let Some(s) = seed {
            self.seed = s;
        }
        self.quadrature.rng_seed = self.seed;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.schema_version != SCHEMA_VERSION {
            return bad(&format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", self.schema_version));
        }
        self.quadrature.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let f = &self.flow;
        if f.steps == 0 || !(f.time.is_finite()) {
            return bad("flow.steps must be positive and flow.time finite");
        }
        if f.strain_resolution < 2 || self.potential.resolution < 2 {
            return bad("strain resolutions need at least 2 nodes per axis");
        }
        if self.construct.xi_rule.iter().any(|&n| n == 0) {
            return bad("construct.xi_rule entries must be positive");
        }
        if self.construct.check_resolution < 2 {
            return bad("construct.check_resolution must be at least 2");
        }
        self.iteration.params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.iteration.a1 > 0.0 && self.iteration.a2 > 0.0) {
            return bad("iteration.a1 and iteration.a2 must be positive");
        }
        if self.iteration.report_points == 0 || self.metric.pairs == 0 {
            return bad("report_points and pairs must be positive");
        }
        if self.metric.length_partitions.iter().any(|&m| m == 0) {
            return bad("metric.length_partitions entries must be positive");
        }
        let d = &self.metric.distance;
        if d.vertices < 4 || d.max_modes < 2 || !(d.tol > 0.0 && d.tol < 1.0) {
            return bad("metric.distance needs vertices >= 4, max_modes >= 2, 0 < tol < 1");
        }
        Ok(())
    }

    /// Compact JSON with every default filled in; fields appear in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}
