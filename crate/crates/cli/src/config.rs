//! Experiment configuration file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vilenkin::{PhiFunction, RadixSystem};

use crate::error::CliError;

pub const MAX_DEPTH: usize = 24;
pub const MAX_GRID: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadixSpec {
    Explicit {
        m: Vec<usize>,
    },
    Constant {
        #[serde(rename = "const")]
        q: usize,
        depth: usize,
    },
}

impl Default for RadixSpec {
    fn default() -> Self {
        RadixSpec::Constant { q: 2, depth: 14 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LebesgueBlock {
    /// Defaults to `M_N`.
    pub n_max: Option<usize>,
    /// Defaults to `1..=16` plus powers of two and `n_max`.
    pub grid: Option<Vec<usize>>,
}

fn default_alphas() -> Vec<usize> {
    vec![3, 7, 12]
}

fn default_threshold() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergeBlock {
    #[serde(default = "default_alphas")]
    pub alphas: Vec<usize>,
    #[serde(default)]
    pub phi: PhiFunction,
    #[serde(default = "default_threshold")]
    pub growth_threshold: f64,
}

impl Default for DivergeBlock {
    fn default() -> Self {
        Self {
            alphas: default_alphas(),
            phi: PhiFunction::default(),
            growth_threshold: default_threshold(),
        }
    }
}

/// Test function for the strong-mean command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Zero,
    Constant {
        value: f64,
    },
    Character {
        n: usize,
    },
    /// `sum c_k psi_k` from `[k, re]` or `[k, re, im]` entries.
    Polynomial {
        coeffs: Vec<Vec<f64>>,
    },
    /// The function assembled from the `diverge` block.
    Counterexample,
}

impl Default for FunctionSpec {
    fn default() -> Self {
        FunctionSpec::Character { n: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongBlock {
    #[serde(default)]
    pub function: FunctionSpec,
    /// Defaults to `2, 4, ..., 4 M_N` plus 6.
    pub n_grid: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub radix: RadixSpec,
    /// Truncation depth; overrides the radix spec's own depth.
    pub depth: Option<usize>,
    #[serde(default)]
    pub lebesgue: LebesgueBlock,
    #[serde(default)]
    pub diverge: DivergeBlock,
    #[serde(default)]
    pub strong: StrongBlock,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))
    }

    pub fn radices(&self) -> Result<Vec<usize>, CliError> {
        let mut m = match &self.radix {
            RadixSpec::Explicit { m } => m.clone(),
            RadixSpec::Constant { q, depth } => vec![*q; *depth],
        };
        if let Some(d) = self.depth {
            match &self.radix {
                RadixSpec::Constant { q, .. } => m = vec![*q; d],
                RadixSpec::Explicit { .. } if d <= m.len() => m.truncate(d),
                RadixSpec::Explicit { .. } => {
                    return Err(CliError::Config(format!(
                        "depth {d} exceeds the {} explicit radices",
                        m.len()
                    )))
                }
            }
        }
        Ok(m)
    }

    /// Builds the radix system and enforces the size guards.
    pub fn radix_system(&self) -> Result<RadixSystem, CliError> {
        let m = self.radices()?;
        if m.len() > MAX_DEPTH {
            return Err(CliError::Config(format!(
                "depth {} exceeds {MAX_DEPTH}",
                m.len()
            )));
        }
        let rs = RadixSystem::new(m).map_err(|e| CliError::Config(e.to_string()))?;
        if rs.size() > MAX_GRID {
            return Err(CliError::Config(format!(
                "M_N = {} exceeds the grid limit {MAX_GRID}",
                rs.size()
            )));
        }
        Ok(rs)
    }

    pub fn lebesgue_n_max(&self, rs: &RadixSystem) -> Result<usize, CliError> {
        let n_max = self.lebesgue.n_max.unwrap_or(rs.size());
        if n_max == 0 || n_max > rs.size() {
            return Err(CliError::Config(format!(
                "lebesgue n_max = {n_max} must lie in [1, M_N = {}]",
                rs.size()
            )));
        }
        Ok(n_max)
    }

    pub fn lebesgue_grid(&self, n_max: usize) -> Result<Vec<usize>, CliError> {
        let grid = match &self.lebesgue.grid {
            Some(g) => g.clone(),
            None => {
                let mut g: Vec<usize> = (1..=n_max.min(16)).collect();
                let mut p = 32;
                while p <= n_max {
                    g.push(p);
                    p *= 2;
                }
                g.push(n_max);
                g
            }
        };
        if let Some(&bad) = grid.iter().find(|&&n| n == 0 || n > n_max) {
            return Err(CliError::Config(format!(
                "lebesgue grid entry {bad} outside [1, {n_max}]"
            )));
        }
        let mut grid = grid;
        grid.sort_unstable();
        grid.dedup();
        Ok(grid)
    }

    pub fn strong_grid(&self, rs: &RadixSystem) -> Result<Vec<usize>, CliError> {
        let grid = match &self.strong.n_grid {
            Some(g) => g.clone(),
            None => {
                let mut g = vec![6];
                let mut p = 2;
                while p <= 4 * rs.size() {
                    g.push(p);
                    p *= 2;
                }
                g
            }
        };
        if let Some(&bad) = grid.iter().find(|&&n| n < 2) {
            return Err(CliError::Config(format!("strong grid entry {bad} below 2")));
        }
        let mut grid = grid;
        grid.sort_unstable();
        grid.dedup();
        Ok(grid)
    }
}

/// Parses `--phi`: `sqrt_log`, `log_over_loglog2`, `one`, or `const:<value>`.
pub fn parse_phi(s: &str) -> Result<PhiFunction, CliError> {
    match s {
        "sqrt_log" => Ok(PhiFunction::SqrtLog),
        "log_over_loglog2" => Ok(PhiFunction::LogOverLoglog2),
        "one" | "const" => Ok(PhiFunction::one()),
        other => match other.strip_prefix("const:") {
            Some(v) => v
                .parse()
                .map(|value| PhiFunction::Const { value })
                .map_err(|_| CliError::Config(format!("bad phi constant {v:?}"))),
            None => Err(CliError::Config(format!("unknown phi {other:?}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_radix_forms() {
        let c = ExperimentConfig::from_json(r#"{"radix": {"m": [2, 3, 2]}}"#).unwrap();
        assert_eq!(c.radix_system().unwrap().radices(), &[2, 3, 2]);
        let c = ExperimentConfig::from_json(r#"{"radix": {"const": 3, "depth": 4}, "depth": 2}"#)
            .unwrap();
        assert_eq!(c.radix_system().unwrap().radices(), &[3, 3]);
        let c = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(c.radix_system().unwrap().size(), 1 << 14);
        assert_eq!(c.diverge.alphas, vec![3, 7, 12]);
        assert_eq!(c.diverge.phi, PhiFunction::SqrtLog);
    }

    #[test]
    fn guards() {
        let big = ExperimentConfig::from_json(r#"{"radix": {"const": 16, "depth": 7}}"#).unwrap();
        assert!(matches!(big.radix_system(), Err(CliError::Config(_))));
        let bad = ExperimentConfig::from_json(r#"{"radix": {"m": [2, 17]}}"#).unwrap();
        assert!(bad.radix_system().is_err());
        let deep = ExperimentConfig::from_json(r#"{"radix": {"m": [2, 2]}, "depth": 3}"#).unwrap();
        assert!(deep.radices().is_err());
        assert!(ExperimentConfig::from_json(r#"{"radix": {"m": [2]}, "bogus": 1}"#).is_err());
        let c = ExperimentConfig::from_json(
            r#"{"radix": {"const": 2, "depth": 3}, "lebesgue": {"n_max": 9}}"#,
        )
        .unwrap();
        let rs = c.radix_system().unwrap();
        assert!(c.lebesgue_n_max(&rs).is_err());
    }

    #[test]
    fn phi_and_function_specs() {
        assert_eq!(parse_phi("one").unwrap(), PhiFunction::one());
        assert_eq!(
            parse_phi("const:2.5").unwrap(),
            PhiFunction::Const { value: 2.5 }
        );
        assert!(parse_phi("cubic").is_err());
        let c = ExperimentConfig::from_json(
            r#"{"diverge": {"alphas": [2, 5], "phi": {"kind": "table", "points": [[1, 1.0], [64, 2.0]]}},
                "strong": {"function": {"kind": "polynomial", "coeffs": [[3, 1.0], [9, 0.5, -0.5]]}}}"#,
        )
        .unwrap();
        assert!(matches!(c.diverge.phi, PhiFunction::Table { .. }));
        assert!(matches!(c.strong.function, FunctionSpec::Polynomial { .. }));
    }

    #[test]
    fn default_grids() {
        let c = ExperimentConfig::from_json(r#"{"radix": {"const": 2, "depth": 6}}"#).unwrap();
        let rs = c.radix_system().unwrap();
        let g = c.lebesgue_grid(c.lebesgue_n_max(&rs).unwrap()).unwrap();
        assert_eq!(g, (1..=16).chain([32, 64]).collect::<Vec<_>>());
        let s = c.strong_grid(&rs).unwrap();
        assert_eq!(s, vec![2, 4, 6, 8, 16, 32, 64, 128, 256]);
    }
}
