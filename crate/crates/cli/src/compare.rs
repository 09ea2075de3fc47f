//! `compare-pauli`: the separable-minus-entangled error gap over a
//! (lambda1, lambda3) grid at fixed lambda2 and N.

use std::path::PathBuf;

use chanest::analysis::{delta, AnalysisOptions, CostKind};
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{self, FormatArg, GridSpec};
use crate::manifest::RunManifest;
use crate::output;
use crate::CliError;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Total qubits per protocol run (divisible by 6).
    #[arg(long)]
    n: Option<u64>,
    /// Fixed second Pauli probability.
    #[arg(long)]
    lambda2: Option<f64>,
    /// Grid step over lambda1 and lambda3.
    #[arg(long)]
    step: Option<f64>,
    /// Sphere-quadrature resolution for the fidelity gap.
    #[arg(long)]
    resolution: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file mirroring these flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct CompareFileConfig {
    n: Option<u64>,
    lambda2: Option<f64>,
    step: Option<f64>,
    resolution: Option<u32>,
    format: Option<FormatArg>,
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ResolvedCompare {
    n: u64,
    lambda2: f64,
    step: f64,
    resolution: u32,
    format: String,
}

#[derive(Debug, Serialize)]
struct Row {
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    n: u64,
    delta_stat: Option<f64>,
    delta_fid: Option<f64>,
    status: String,
}

impl Row {
    fn to_csv(&self) -> String {
        let fmt = |v: Option<f64>| v.map(chanest::analysis::format_float).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            chanest::analysis::format_float(self.lambda1),
            chanest::analysis::format_float(self.lambda2),
            chanest::analysis::format_float(self.lambda3),
            self.n,
            fmt(self.delta_stat),
            fmt(self.delta_fid),
            self.status
        )
    }
}

pub fn run(args: CompareArgs) -> Result<i32, CliError> {
    let file: CompareFileConfig = match &args.config {
        Some(path) => config::load_config_file(path)?,
        None => CompareFileConfig::default(),
    };
    let n = args.n.or(file.n).unwrap_or(6);
    let lambda2 = args.lambda2.or(file.lambda2).unwrap_or(0.0);
    let step = args.step.or(file.step).unwrap_or(0.05);
    let resolution = args.resolution.or(file.resolution).unwrap_or(32);
    let format = args.format.or(file.format).unwrap_or(FormatArg::Csv);
    let out_dir = args
        .out
        .or(file.out)
        .ok_or_else(|| CliError::Usage("--out is required".into()))?;
    if n % 6 != 0 || n == 0 {
        return Err(CliError::Usage(format!(
            "N must be a positive multiple of 6, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&lambda2) {
        return Err(CliError::Usage(format!("lambda2 {lambda2} outside [0, 1]")));
    }

    let axis = GridSpec {
        start: 0.0,
        stop: 1.0,
        step,
    }
    .points()?;
    let opts = AnalysisOptions {
        resolution,
        ..AnalysisOptions::default()
    };

    let mut grid = Vec::new();
    for &l1 in &axis {
        for &l3 in &axis {
            grid.push((l1, l3));
        }
    }
    let rows: Vec<Row> = grid
        .par_iter()
        .map(|&(l1, l3)| {
            // Points outside the probability simplex are marked, not dropped,
            // so the output grid stays rectangular.
            if l1 + lambda2 + l3 > 1.0 + 1e-12 {
                return Ok(Row {
                    lambda1: l1,
                    lambda2,
                    lambda3: l3,
                    n,
                    delta_stat: None,
                    delta_fid: None,
                    status: "invalid:simplex".into(),
                });
            }
            let lambda = [l1, lambda2, l3];
            let stat = delta(lambda, n, CostKind::Statistical, &opts)?;
            let fid = delta(lambda, n, CostKind::Fidelity, &opts)?;
            Ok(Row {
                lambda1: l1,
                lambda2,
                lambda3: l3,
                n,
                delta_stat: Some(stat.value),
                delta_fid: Some(fid.value),
                status: "ok".into(),
            })
        })
        .collect::<Result<_, CliError>>()?;

    std::fs::create_dir_all(&out_dir)?;
    let resolved = ResolvedCompare {
        n,
        lambda2,
        step,
        resolution,
        format: match format {
            FormatArg::Csv => "csv".into(),
            FormatArg::Json => "json".into(),
        },
    };
    let mut manifest = RunManifest::new("compare-pauli", None, resolved);
    match format {
        FormatArg::Csv => {
            let header = "lambda1,lambda2,lambda3,n,delta_stat,delta_fid,status";
            let lines: Vec<String> = rows.iter().map(Row::to_csv).collect();
            manifest.write_output(&out_dir, "compare.csv", &output::csv_text(header, &lines))?;
        }
        FormatArg::Json => {
            manifest.write_output(&out_dir, "compare.json", &output::json_text(&rows))?;
        }
    }
    manifest.finalize(&out_dir)?;
    println!("wrote {} rows to {}", rows.len(), out_dir.display());
    Ok(0)
}
