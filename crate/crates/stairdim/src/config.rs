//! JSON run configuration: system, potential, exponent, numerics, output.
//!
//! The schema is strict (`deny_unknown_fields`), so typos fail with a
//! line- and column-precise message instead of being silently ignored.
//! Every numeric default lives in [`Settings`], which the `numerics`
//! object overrides field by field; a run is reproducible from the file
//! alone.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ifs::{CodedPoint, IfsSpec, Interval, MapSpec, Tail, Word};
use crate::settings::Settings;
use crate::thermo::{solve_delta, PotentialSpec};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub potential: Option<PotentialConfig>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub numerics: Settings,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub point: Option<PointConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// `[x_lo, x_hi]`.
    pub domain: [f64; 2],
    pub maps: Vec<MapConfig>,
    /// Optional cross-check against `maps.len()`.
    #[serde(default)]
    pub alphabet_size: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapConfig {
    Affine { ratio: f64, offset: f64 },
    Nonlinear { c: f64, d: f64, e: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    Geometric,
    ScaledGeometric {
        t: f64,
    },
    DarstShift,
    /// `delta * phi` with `delta` solved at the configured depth.
    Hausdorff,
    LinearCombination {
        coeff_phi: f64,
        coeff_base: f64,
        base: Box<PotentialConfig>,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    #[serde(default)]
    pub prefix: Vec<usize>,
    pub tail: TailConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TailConfig {
    Constant(usize),
    Periodic(Vec<usize>),
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::input(format!("config {}: {e}", path.display())))
    }

    pub fn build_system(&self) -> Result<IfsSpec> {
        if let Some(n) = self.system.alphabet_size {
            if n != self.system.maps.len() {
                return Err(Error::input(format!(
                    "alphabet_size = {n} but {} maps are given",
                    self.system.maps.len()
                )));
            }
        }
        let maps: Result<Vec<MapSpec>> = self
            .system
            .maps
            .iter()
            .map(|m| match *m {
                MapConfig::Affine { ratio, offset } => MapSpec::affine(ratio, offset),
                MapConfig::Nonlinear { c, d, e } => MapSpec::nonlinear(c, d, e),
            })
            .collect();
        IfsSpec::new(
            maps?,
            Interval::new(self.system.domain[0], self.system.domain[1]),
        )
    }

    /// Effective numeric settings, with the environment budget override
    /// applied.
    pub fn build_settings(&self) -> Result<Settings> {
        let mut settings = self.numerics.clone();
        if let Ok(raw) = std::env::var("STAIRDIM_BUDGET") {
            let budget: u64 = raw.parse().map_err(|_| {
                Error::input(format!("STAIRDIM_BUDGET must be an integer, got {raw:?}"))
            })?;
            settings.cylinder_budget = budget;
        }
        Ok(settings)
    }

    pub fn build_potential(&self, spec: &IfsSpec, settings: &Settings) -> Result<PotentialSpec> {
        let config = self
            .potential
            .as_ref()
            .ok_or_else(|| Error::input("this command needs a `potential` in the config"))?;
        build_potential(config, spec, settings)
    }

    pub fn require_alpha(&self) -> Result<f64> {
        self.alpha
            .ok_or_else(|| Error::input("this command needs `alpha` in the config"))
    }

    pub fn build_point(&self) -> Result<Option<CodedPoint>> {
        match &self.point {
            None => Ok(None),
            Some(p) => {
                let tail = match &p.tail {
                    TailConfig::Constant(s) => Tail::Constant(*s),
                    TailConfig::Periodic(w) => Tail::Periodic(Word::new(w.clone())),
                };
                Ok(Some(CodedPoint::new(Word::new(p.prefix.clone()), tail)?))
            }
        }
    }
}

fn build_potential(
    config: &PotentialConfig,
    spec: &IfsSpec,
    settings: &Settings,
) -> Result<PotentialSpec> {
    Ok(match config {
        PotentialConfig::Geometric => PotentialSpec::Geometric,
        PotentialConfig::ScaledGeometric { t } => PotentialSpec::ScaledGeometric(*t),
        PotentialConfig::DarstShift => PotentialSpec::DarstShift,
        PotentialConfig::Hausdorff => {
            let delta = solve_delta(spec, settings.pressure_depth, settings)?;
            PotentialSpec::ScaledGeometric(delta)
        }
        PotentialConfig::LinearCombination {
            coeff_phi,
            coeff_base,
            base,
        } => PotentialSpec::LinearCombination {
            coeff_phi: *coeff_phi,
            coeff_base: *coeff_base,
            base: Box::new(build_potential(base, spec, settings)?),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<RunConfig> {
        serde_json::from_str(json).map_err(|e| Error::input(e.to_string()))
    }

    const MINIMAL: &str = r#"{
        "system": {
            "domain": [0.0, 1.0],
            "maps": [
                {"kind": "affine", "ratio": 0.1, "offset": 0.0},
                {"kind": "affine", "ratio": 0.5, "offset": 0.5}
            ]
        },
        "potential": {"form": "darst-shift"},
        "alpha": 1.0
    }"#;

    #[test]
    fn minimal_config_builds() {
        let config = parse(MINIMAL).unwrap();
        let spec = config.build_system().unwrap();
        assert_eq!(spec.alphabet_size(), 2);
        let settings = config.build_settings().unwrap();
        assert_eq!(settings.pressure_depth, 16);
        let psi = config.build_potential(&spec, &settings).unwrap();
        assert_eq!(psi, PotentialSpec::DarstShift);
    }

    #[test]
    fn unknown_field_is_rejected_with_position() {
        let bad = MINIMAL.replace("\"alpha\": 1.0", "\"alpha\": 1.0, \"alhpa\": 2.0");
        let err = parse(&bad).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("alhpa"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn alphabet_size_mismatch_is_input_error() {
        let bad = MINIMAL.replace("\"maps\"", "\"alphabet_size\": 3, \"maps\"");
        let config = parse(&bad).unwrap();
        assert!(matches!(config.build_system(), Err(Error::Input(_))));
    }

    #[test]
    fn numerics_partial_override() {
        let json = MINIMAL.replace(
            "\"alpha\": 1.0",
            "\"alpha\": 1.0, \"numerics\": {\"pressure_depth\": 10}",
        );
        let config = parse(&json).unwrap();
        let settings = config.build_settings().unwrap();
        assert_eq!(settings.pressure_depth, 10);
        assert_eq!(settings.root_tol, 1e-10);
    }

    #[test]
    fn hausdorff_potential_solves_delta() {
        let json = MINIMAL.replace("{\"form\": \"darst-shift\"}", "{\"form\": \"hausdorff\"}");
        let config = parse(&json).unwrap();
        let spec = config.build_system().unwrap();
        let settings = config.build_settings().unwrap();
        match config.build_potential(&spec, &settings).unwrap() {
            PotentialSpec::ScaledGeometric(t) => assert!(t > 0.4 && t < 0.7),
            other => panic!("unexpected potential {other:?}"),
        }
    }

    #[test]
    fn point_config_builds() {
        let json = MINIMAL.replace(
            "\"alpha\": 1.0",
            r#""alpha": 1.0, "point": {"prefix": [0, 1], "tail": {"periodic": [0, 1]}}"#,
        );
        let config = parse(&json).unwrap();
        let point = config.build_point().unwrap().unwrap();
        assert_eq!(point.expand(4).symbols(), &[0, 1, 0, 1]);
    }
}
