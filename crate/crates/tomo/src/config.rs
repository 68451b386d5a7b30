use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tomo_core::evolution::MAX_STEP;
use tomo_core::statistics::OverlapQuadrature;
use tomo_core::transforms::TransformConfig;
use tomo_core::SliceQuadrature;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "TOMO_CONFIG";

/// Grid defaults and tolerances shared by all commands.
///
/// Every field may be omitted from a configuration file; command-line flags
/// take precedence over the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// `X` samples cover `[-x_max, x_max)` in `x_points` steps.
    pub x_max: f64,
    pub x_points: usize,
    /// Uniform angles over `[0, pi)`.
    pub angles: usize,
    /// Square phase-space grid of reconstructions.
    pub phase_half_width: f64,
    pub phase_points: usize,
    /// Finer phase-space grid used to re-project a reconstruction.
    pub round_trip_points: usize,
    /// Position grid of reconstructed density kernels.
    pub density_half_width: f64,
    pub density_points: usize,
    /// Width of `classical-point` states when the descriptor omits it.
    pub point_width: f64,
    /// Largest step of the invariant ODE integration.
    pub ode_step: f64,
    /// Spin tomogram layout; zero picks the smallest exact layout.
    pub spin_alpha_points: usize,
    pub spin_beta_points: usize,
    pub seed: u64,
    pub transform: TransformConfig,
    pub overlap: OverlapQuadrature,
    pub slice: SliceQuadrature,
    /// Per-check tolerance overrides, keyed by check name.
    pub check_tolerances: BTreeMap<String, f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            x_max: 8.0,
            x_points: 256,
            angles: 64,
            phase_half_width: 6.0,
            phase_points: 121,
            round_trip_points: 769,
            density_half_width: 6.0,
            density_points: 97,
            point_width: 0.05,
            ode_step: MAX_STEP,
            spin_alpha_points: 0,
            spin_beta_points: 0,
            seed: 42,
            transform: TransformConfig::default(),
            overlap: OverlapQuadrature::default(),
            slice: SliceQuadrature::default(),
            check_tolerances: BTreeMap::new(),
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }

    /// The file given on the command line, else the one named by
    /// `TOMO_CONFIG`, else the defaults.
    pub fn load(explicit: Option<&Path>) -> CliResult<Self> {
        if let Some(p) = explicit {
            return Self::from_file(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.check_tolerances.get(check).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_files_keep_defaults() {
        let c: Config = serde_json::from_str(r#"{"angles": 32, "transform": {"taper_start": 0.7}}"#).unwrap();
        assert_eq!(c.angles, 32);
        assert_eq!(c.x_points, 256);
        assert_eq!(c.transform.taper_start, 0.7);
        assert_eq!(c.transform.mu_cutoff, TransformConfig::default().mu_cutoff);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"angels": 32}"#).is_err());
    }
}
