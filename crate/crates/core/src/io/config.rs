//! Run configuration shared by every command.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::curves::{BoundaryCurve, CurveSpec};
use crate::error::{PlateauError, Result};
use crate::mfs::build_basis;
use crate::optimizer::{DiagnosticSettings, OptimizerSettings};
use crate::search::{fourier_initial, random_initial};
use crate::surface::Configuration;

/// Complete description of a run. Unknown keys are rejected at every level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: CurveSpec,
    #[serde(default = "default_n")]
    pub n: usize,
    /// Radius of the source circle.
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default)]
    pub diagnostics: DiagnosticSettings,
    #[serde(default)]
    pub search: SearchSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputSpec,
    /// Worker threads for sweeps and searches; all cores when absent.
    #[serde(default)]
    pub jobs: Option<usize>,
}

fn default_n() -> usize {
    64
}

fn default_radius() -> f64 {
    1.5
}

/// Starting configuration of a single solve.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    #[default]
    Equidistant,
    Fourier {
        s: f64,
        m: i64,
    },
    Random {
        seed: u64,
        #[serde(default = "default_knots")]
        knots: usize,
    },
    Explicit {
        angles: Vec<f64>,
    },
}

/// Few knots give large-scale perturbations, which reach more than one basin.
fn default_knots() -> usize {
    4
}

/// Parameters of the multi-start protocols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSpec {
    pub s_values: Vec<f64>,
    pub m: i64,
    pub samples: usize,
    pub knots: usize,
    pub seed: u64,
    /// Significant digits used to group Dirichlet energies.
    pub digits: usize,
    /// Also split energy clusters by shape fingerprint.
    pub split_by_shape: bool,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            s_values: Vec::new(),
            m: 2,
            samples: 50,
            knots: default_knots(),
            seed: 0,
            digits: 5,
            split_by_shape: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridField {
    Dilatation,
    MeanCurvature,
}

/// Polar sampling grid for field output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub field: GridField,
    pub n_r: usize,
    pub n_theta: usize,
    pub max_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { field: GridField::Dilatation, n_r: 32, n_theta: 128, max_radius: 1.0 }
    }
}

/// Where and what to write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Write `surface.obj` plus a per-vertex scalar sidecar.
    pub mesh: bool,
    pub mesh_n_r: usize,
    pub mesh_n_theta: usize,
    /// Write `dilatation_grid.csv` after a solve.
    pub dilatation_grid: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: PathBuf::from("out"), mesh: false, mesh_n_r: 32, mesh_n_theta: 128, dilatation_grid: false }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// A config with defaults everywhere except the curve.
    pub fn for_curve(curve: CurveSpec) -> Self {
        RunConfig {
            curve,
            n: default_n(),
            radius: default_radius(),
            optimizer: OptimizerSettings::default(),
            initial: InitialSpec::default(),
            diagnostics: DiagnosticSettings::default(),
            search: SearchSpec::default(),
            grid: GridSpec::default(),
            output: OutputSpec::default(),
            jobs: None,
        }
    }

    /// Checks every numeric range without running anything expensive.
    pub fn validate(&self) -> Result<()> {
        build_basis(self.n, self.radius)?.check_well_posed()?;
        BoundaryCurve::new(self.curve.clone())?;
        self.optimizer.validate()?;
        self.diagnostics.validate()?;
        self.initial_configuration()?;
        let s = &self.search;
        if !(1..=17).contains(&s.digits) {
            return Err(PlateauError::invalid(format!("digits must lie in 1..=17 (got {})", s.digits)));
        }
        if s.knots < 4 {
            return Err(PlateauError::invalid(format!("knots must be at least 4 (got {})", s.knots)));
        }
        if s.s_values.iter().any(|v| !v.is_finite()) {
            return Err(PlateauError::invalid("s values must be finite"));
        }
        let g = &self.grid;
        if g.n_r == 0 || g.n_theta == 0 || !(g.max_radius > 0.0 && g.max_radius <= 1.0) {
            return Err(PlateauError::invalid("grid needs n_r >= 1, n_theta >= 1 and max_radius in (0, 1]"));
        }
        if self.output.mesh_n_r == 0 || self.output.mesh_n_theta < 3 {
            return Err(PlateauError::invalid("mesh needs mesh_n_r >= 1 and mesh_n_theta >= 3"));
        }
        if self.jobs == Some(0) {
            return Err(PlateauError::invalid("jobs must be positive"));
        }
        Ok(())
    }

    pub fn initial_configuration(&self) -> Result<Configuration> {
        match &self.initial {
            InitialSpec::Equidistant => Ok(Configuration::equidistant(self.n)),
            InitialSpec::Fourier { s, m } => fourier_initial(self.n, *s, *m),
            InitialSpec::Random { seed, knots } => random_initial(self.n, *seed, *knots),
            InitialSpec::Explicit { angles } => {
                if angles.len() != self.n {
                    return Err(PlateauError::invalid(format!(
                        "explicit configuration has {} angles, n is {}",
                        angles.len(),
                        self.n
                    )));
                }
                Configuration::from_angles(angles)
            }
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::to_json_string;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = RunConfig::from_json(r#"{"curve":{"name":"ellipse"}}"#).unwrap();
        assert_eq!(c.n, 64);
        assert_eq!(c.radius, 1.5);
        assert_eq!(c.initial, InitialSpec::Equidistant);
        c.validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"curve":{"name":"ellipse"},"typo":1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"curve":{"name":"ellipse"},"optimizer":{"etaa":0.1}}"#).is_err());
    }

    #[test]
    fn invalid_radius_fails_validation() {
        let mut c = RunConfig::for_curve(CurveSpec::Circle { radius: 1.0 });
        c.radius = 0.5;
        assert_eq!(c.validate().unwrap_err().to_string(), "radius must exceed 1");
    }

    #[test]
    fn round_trip_is_exact() {
        let mut c = RunConfig::for_curve(CurveSpec::Enneper { r: 1.15 });
        c.initial = InitialSpec::Fourier { s: -0.1, m: 2 };
        c.optimizer.eta = 1.0 / 3.0;
        c.search.s_values = vec![-1.0, 0.1, 0.7];
        let back = RunConfig::from_json(&to_json_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn explicit_length_is_checked() {
        let mut c = RunConfig::for_curve(CurveSpec::Ellipse { a: 2.0, b: 1.0 });
        c.n = 8;
        c.initial = InitialSpec::Explicit { angles: vec![0.0; 4] };
        assert!(c.validate().is_err());
    }
}
