//! Run configuration: built-in defaults, then `TWISTOR_LAB_OUT`, then the
//! config file, then command-line flags, each layer overriding the previous.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twistor_core::pairing::PoincareTolerances;

use crate::error::CliError;

pub const OUT_ENV: &str = "TWISTOR_LAB_OUT";
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_NODES: usize = 64;
/// Relative well-definedness residual above which `pair` fails.
pub const DEFAULT_PAIR_THRESHOLD: f64 = 1e-5;

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub contour: ContourSection,
    #[serde(default)]
    pub pair: PairSection,
    #[serde(default)]
    pub poincare: PoincareSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSection {
    pub radius: Option<f64>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareSection {
    pub tol_in_relative: Option<f64>,
    pub tol_out_c: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line; `None` defers to lower layers.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub contour_radius: Option<f64>,
    pub contour_nodes: Option<usize>,
    pub threshold: Option<f64>,
}

/// Fully resolved settings; recorded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub contour_radius: f64,
    pub contour_nodes: usize,
    pub pair_threshold: f64,
    pub poincare: PoincareTolerances,
}

impl RunConfig {
    pub fn resolve(file: &FileConfig, flags: &Overrides, env_out: Option<PathBuf>) -> Result<Self, CliError> {
        let poincare_default = PoincareTolerances::default();
        let cfg = RunConfig {
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out_dir: flags.out_dir.clone().or_else(|| file.out_dir.clone()).or(env_out).unwrap_or_else(|| ".".into()),
            contour_radius: flags.contour_radius.or(file.contour.radius).unwrap_or(1.0),
            contour_nodes: flags.contour_nodes.or(file.contour.nodes).unwrap_or(DEFAULT_NODES),
            pair_threshold: flags.threshold.or(file.pair.threshold).unwrap_or(DEFAULT_PAIR_THRESHOLD),
            poincare: PoincareTolerances {
                tol_in_relative: file.poincare.tol_in_relative.unwrap_or(poincare_default.tol_in_relative),
                tol_out_c: file.poincare.tol_out_c.unwrap_or(poincare_default.tol_out_c),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("contour radius", self.contour_radius),
            ("pair threshold", self.pair_threshold),
            ("poincare tol_in_relative", self.poincare.tol_in_relative),
            ("poincare tol_out_c", self.poincare.tol_out_c),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.contour_nodes < 8 || !self.contour_nodes.is_multiple_of(2) {
            return Err(CliError::input(format!("contour nodes must be even and ≥ 8, got {}", self.contour_nodes)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_apply_in_order() {
        let file: FileConfig = toml::from_str("seed = 3\nout_dir = \"from-file\"\n[pair]\nthreshold = 0.5\n").unwrap();
        let env = Some(PathBuf::from("from-env"));
        let none = Overrides::default();

        let base = RunConfig::resolve(&FileConfig::default(), &none, env.clone()).unwrap();
        assert_eq!((base.seed, base.out_dir.as_path()), (DEFAULT_SEED, Path::new("from-env")));

        let filed = RunConfig::resolve(&file, &none, env.clone()).unwrap();
        assert_eq!((filed.seed, filed.out_dir.as_path(), filed.pair_threshold), (3, Path::new("from-file"), 0.5));

        let flags = Overrides { seed: Some(11), out_dir: Some("from-flag".into()), ..Overrides::default() };
        let flagged = RunConfig::resolve(&file, &flags, env).unwrap();
        assert_eq!((flagged.seed, flagged.out_dir.as_path()), (11, Path::new("from-flag")));
    }

    #[test]
    fn tolerances_must_be_positive() {
        let file: FileConfig = toml::from_str("[poincare]\ntol_out_c = 0.0\n").unwrap();
        assert!(RunConfig::resolve(&file, &Overrides::default(), None).is_err());
        let flags = Overrides { threshold: Some(f64::NAN), ..Overrides::default() };
        assert!(RunConfig::resolve(&FileConfig::default(), &flags, None).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("sede = 3\n").is_err());
    }
}
