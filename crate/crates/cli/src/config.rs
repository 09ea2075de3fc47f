//! Shared flag parsing: channel specifications, grids, and config-file
//! merging. Flags override config-file values field by field.

use std::path::Path;

use chanest::analysis::CostKind;
use chanest::channels::ChannelModel;
use clap::ValueEnum;
use serde::de::DeserializeOwned;

use crate::CliError;

/// Cost selector (`stat`, `fid`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostArg {
    Stat,
    Fid,
}

impl CostArg {
    pub fn kind(&self) -> CostKind {
        match self {
            CostArg::Stat => CostKind::Statistical,
            CostArg::Fid => CostKind::Fidelity,
        }
    }
}

/// Method selector (`closed`, `enum`, `mc`, or `auto`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Auto,
    Closed,
    Enum,
    Mc,
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Json,
}

/// Loads a JSON config file into the subcommand's config type.
pub fn load_config_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

/// Parses a comma-separated list of floats.
pub fn parse_float_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid number '{t}'")))
        })
        .collect()
}

/// Builds a channel model from a kind name and its parameter list
/// (row-major for the generalized Pauli family, which also needs `dim`).
pub fn build_channel(
    kind: &str,
    lambda: &[f64],
    dim: Option<usize>,
) -> Result<ChannelModel, CliError> {
    let need = |count: usize| -> Result<(), CliError> {
        if lambda.len() != count {
            return Err(CliError::Usage(format!(
                "channel '{kind}' needs {count} parameter(s), got {}",
                lambda.len()
            )));
        }
        Ok(())
    };
    let model = match kind {
        "depolarizing" => {
            need(1)?;
            ChannelModel::depolarizing(lambda[0])
        }
        "phase-damping" => {
            need(1)?;
            ChannelModel::phase_damping(lambda[0])
        }
        "amplitude-damping" => {
            need(1)?;
            ChannelModel::amplitude_damping(lambda[0])
        }
        "pauli" => {
            need(3)?;
            ChannelModel::pauli([lambda[0], lambda[1], lambda[2]])
        }
        "general-affine" => {
            need(12)?;
            let mut params = [0.0; 12];
            params.copy_from_slice(lambda);
            ChannelModel::general_affine(params)
        }
        "generalized-pauli" => {
            let d = dim.ok_or_else(|| {
                CliError::Usage("generalized-pauli needs --dim".into())
            })?;
            need(d * d)?;
            let rows = lambda.chunks(d).map(|r| r.to_vec()).collect();
            ChannelModel::generalized_pauli(d, rows)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown channel kind '{other}' (expected depolarizing, phase-damping, \
                 amplitude-damping, pauli, general-affine, generalized-pauli)"
            )))
        }
    };
    model.map_err(|e| CliError::Usage(e.to_string()))
}

/// `start:stop:step` grid specification, inclusive of both ends within a
/// half-step tolerance.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "grid '{text}' must be start:stop:step"
            )));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("invalid grid number '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        Ok(GridSpec {
            start: nums[0],
            stop: nums[1],
            step: nums[2],
        })
    }

    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if self.step <= 0.0 {
            return Err(CliError::Usage(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        let mut out = Vec::new();
        let mut i = 0u64;
        loop {
            let x = self.start + self.step * i as f64;
            if x > self.stop + self.step * 0.5 {
                break;
            }
            out.push(x.min(self.stop));
            i += 1;
        }
        if out.is_empty() {
            return Err(CliError::Usage(format!(
                "grid {}:{}:{} contains no points",
                self.start, self.stop, self.step
            )));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_inclusive() {
        let grid = GridSpec::parse("0:0.5:0.1").unwrap();
        let pts = grid.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], 0.0);
        assert!((pts[5] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_or_bad_grids_rejected() {
        assert!(GridSpec::parse("0:0.5").is_err());
        assert!(GridSpec::parse("0:0.5:0").unwrap().points().is_err());
        assert!(GridSpec::parse("0.5:0.1:0.1").unwrap().points().is_err());
    }

    #[test]
    fn channel_parsing() {
        assert!(build_channel("depolarizing", &[0.2], None).is_ok());
        assert!(build_channel("depolarizing", &[0.2, 0.3], None).is_err());
        assert!(build_channel("pauli", &[0.1, 0.1, 0.1], None).is_ok());
        assert!(build_channel("nope", &[0.1], None).is_err());
        assert!(build_channel("generalized-pauli", &[0.7, 0.1, 0.1, 0.1], Some(2)).is_ok());
        assert!(build_channel("generalized-pauli", &[0.7, 0.3], None).is_err());
    }
}
