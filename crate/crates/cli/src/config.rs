//! Run configuration: defaults, an optional JSON config file, and flag
//! overrides, resolved in that order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cylquant::{choose_window, BasisWindow, Epsilon, Epsilon64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `auto` or an explicit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SizeSpec {
    Fixed(usize),
    Auto(AutoKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoKeyword {
    Auto,
}

impl SizeSpec {
    pub const AUTO: SizeSpec = SizeSpec::Auto(AutoKeyword::Auto);
}

impl FromStr for SizeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(Self::AUTO)
        } else {
            s.parse().map(SizeSpec::Fixed).map_err(|_| format!("expected `auto` or a nonnegative integer, got `{s}`"))
        }
    }
}

impl fmt::Display for SizeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeSpec::Fixed(n) => write!(f, "{n}"),
            SizeSpec::Auto(_) => f.write_str("auto"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// One value or a list, for `epsilon` in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

/// On-disk form; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub epsilon: Option<OneOrMany>,
    pub window_n: Option<SizeSpec>,
    pub tol: Option<f64>,
    pub gh_nodes: Option<usize>,
    pub beta_points: Option<SizeSpec>,
    #[serde(alias = "J_max")]
    pub j_max: Option<f64>,
    pub output_path: Option<String>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub epsilon: Vec<f64>,
    pub window_n: SizeSpec,
    pub tol: f64,
    pub gh_nodes: usize,
    pub beta_points: SizeSpec,
    pub j_max: f64,
    pub output_path: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: vec![1.0],
            window_n: SizeSpec::AUTO,
            tol: 1e-12,
            gh_nodes: cylquant::quadrature::DEFAULT_GH_NODES,
            beta_points: SizeSpec::AUTO,
            j_max: 3.0,
            output_path: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    /// Layers `file` then `flags` over the defaults and validates the result.
    pub fn resolve(file: Option<ConfigFile>, flags: ConfigFile) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for layer in file.into_iter().chain(std::iter::once(flags)) {
            if let Some(e) = layer.epsilon {
                cfg.epsilon = match e {
                    OneOrMany::One(v) => vec![v],
                    OneOrMany::Many(v) => v,
                };
            }
            if let Some(v) = layer.window_n {
                cfg.window_n = v;
            }
            if let Some(v) = layer.tol {
                cfg.tol = v;
            }
            if let Some(v) = layer.gh_nodes {
                cfg.gh_nodes = v;
            }
            if let Some(v) = layer.beta_points {
                cfg.beta_points = v;
            }
            if let Some(v) = layer.j_max {
                cfg.j_max = v;
            }
            if layer.output_path.is_some() {
                cfg.output_path = layer.output_path;
            }
            if let Some(v) = layer.format {
                cfg.format = v;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.epsilon.is_empty() {
            return Err(CliError::Config("at least one epsilon is required".into()));
        }
        for &e in &self.epsilon {
            Epsilon::new(e)?;
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if !(self.j_max.is_finite() && self.j_max > 0.0) {
            return Err(CliError::Config(format!("J_max must be positive, got {}", self.j_max)));
        }
        if self.gh_nodes == 0 || self.gh_nodes > cylquant::quadrature::MAX_GH_NODES {
            return Err(CliError::Config(format!(
                "gh_nodes must lie in 1..={}, got {}",
                cylquant::quadrature::MAX_GH_NODES,
                self.gh_nodes
            )));
        }
        Ok(())
    }

    pub fn epsilons(&self) -> Vec<Epsilon64> {
        self.epsilon.iter().map(|&e| Epsilon::new(e).expect("validated")).collect()
    }

    /// The single epsilon of commands that take exactly one.
    pub fn single_epsilon(&self) -> Result<Epsilon64, CliError> {
        match self.epsilon.as_slice() {
            [e] => Ok(Epsilon::new(*e)?),
            _ => Err(CliError::Config("this command takes exactly one epsilon".into())),
        }
    }

    pub fn window(&self, eps: Epsilon64) -> Result<BasisWindow, CliError> {
        Ok(match self.window_n {
            SizeSpec::Fixed(n) => BasisWindow::new(n),
            SizeSpec::Auto(_) => choose_window(eps, self.j_max, self.tol)?,
        })
    }

    /// Explicit β grid size, or the anti-aliasing bound for `bandwidth`.
    pub fn beta_points(&self, window: BasisWindow, bandwidth: u64) -> usize {
        match self.beta_points {
            SizeSpec::Fixed(n) => n,
            SizeSpec::Auto(_) => cylquant::quadrature::anti_aliasing_points(window, bandwidth),
        }
    }

    pub fn quadrature(&self, window: BasisWindow, bandwidth: u64) -> Result<cylquant::Quadrature64, CliError> {
        Ok(cylquant::QuadratureConfig::new(
            self.gh_nodes,
            self.beta_points(window, bandwidth).max(1),
            self.j_max,
            crate::tolerances::QUADRATURE,
        )?)
    }

    pub fn output(&self) -> Option<PathBuf> {
        self.output_path.as_ref().map(PathBuf::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_spec_parsing() {
        assert_eq!("auto".parse::<SizeSpec>().unwrap(), SizeSpec::AUTO);
        assert_eq!("12".parse::<SizeSpec>().unwrap(), SizeSpec::Fixed(12));
        assert!("-1".parse::<SizeSpec>().is_err());
    }

    #[test]
    fn config_file_schema() {
        let f: ConfigFile = serde_json::from_str(
            r#"{"epsilon": [0.5, 1], "window_n": "auto", "beta_points": 41, "J_max": 2.5, "format": "csv"}"#,
        )
        .unwrap();
        assert_eq!(f.epsilon, Some(OneOrMany::Many(vec![0.5, 1.0])));
        assert_eq!(f.window_n, Some(SizeSpec::AUTO));
        assert_eq!(f.beta_points, Some(SizeSpec::Fixed(41)));
        assert_eq!(f.j_max, Some(2.5));
        assert!(serde_json::from_str::<ConfigFile>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile { tol: Some(1e-8), gh_nodes: Some(40), ..Default::default() };
        let flags = ConfigFile { gh_nodes: Some(50), ..Default::default() };
        let cfg = RunConfig::resolve(Some(file), flags).unwrap();
        assert_eq!(cfg.tol, 1e-8);
        assert_eq!(cfg.gh_nodes, 50);
    }

    #[test]
    fn invalid_values_rejected() {
        let bad = ConfigFile { epsilon: Some(OneOrMany::One(-1.0)), ..Default::default() };
        assert!(RunConfig::resolve(None, bad).is_err());
        let bad = ConfigFile { tol: Some(1.5), ..Default::default() };
        assert!(RunConfig::resolve(None, bad).is_err());
    }

    #[test]
    fn auto_window_uses_j_max() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.window(Epsilon::new(1.0).unwrap()).unwrap().n_max(), 11);
    }
}
