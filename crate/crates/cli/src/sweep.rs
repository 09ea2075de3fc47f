//! `sweep`: mean-error curves over a one-parameter channel grid.
//!
//! Rows are laid out channel-major: for each N, for each lambda, for each
//! cost, for each method. Grid points are evaluated in parallel but always
//! written in grid order, so output bytes are deterministic (and, with a
//! fixed seed, identical across reruns even for Monte-Carlo rows).

use std::path::PathBuf;

use chanest::analysis::{
    mean_error_closed, mean_error_enumerated, mean_error_montecarlo, AnalysisOptions, CostKind,
    MeanErrorReport, Method,
};
use chanest::protocols::{ProtocolKind, ProtocolSpec};
use chanest::Error;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{self, CostArg, FormatArg, GridSpec, MethodArg};
use crate::manifest::RunManifest;
use crate::output;
use crate::CliError;

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Channel kind: depolarizing | phase-damping | amplitude-damping.
    #[arg(long)]
    channel: Option<String>,
    /// Parameter grid start:stop:step.
    #[arg(long, value_name = "START:STOP:STEP")]
    lambda_grid: Option<String>,
    /// Comma-separated list of qubit budgets N.
    #[arg(long)]
    n: Option<String>,
    /// Costs to evaluate.
    #[arg(long, value_delimiter = ',')]
    cost: Option<Vec<CostArg>>,
    /// Evaluation methods; `auto` picks closed for stat and enum for fid.
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<MethodArg>>,
    /// Monte-Carlo runs per grid point.
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sphere-quadrature resolution for fidelity costs.
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

/// Config-file shape; field names mirror the long flags.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SweepFileConfig {
    channel: Option<String>,
    lambda_grid: Option<String>,
    n: Option<String>,
    cost: Option<Vec<CostArg>>,
    method: Option<Vec<MethodArg>>,
    runs: Option<u64>,
    seed: Option<u64>,
    resolution: Option<u32>,
    format: Option<FormatArg>,
    out: Option<PathBuf>,
}

/// Fully resolved configuration, echoed into the manifest.
#[derive(Debug, Serialize)]
struct ResolvedSweep {
    channel: String,
    lambda_grid: GridSpec,
    n: Vec<u64>,
    cost: Vec<String>,
    method: Vec<String>,
    runs: u64,
    seed: u64,
    resolution: u32,
    format: String,
}

pub fn run(args: SweepArgs) -> Result<i32, CliError> {
    let file: SweepFileConfig = match &args.config {
        Some(path) => config::load_config_file(path)?,
        None => SweepFileConfig::default(),
    };
    let channel_kind = args
        .channel
        .or(file.channel)
        .ok_or_else(|| CliError::Usage("--channel is required".into()))?;
    let grid_text = args
        .lambda_grid
        .or(file.lambda_grid)
        .ok_or_else(|| CliError::Usage("--lambda-grid is required".into()))?;
    let grid = GridSpec::parse(&grid_text)?;
    let n_text = args
        .n
        .or(file.n)
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let n_list: Vec<u64> = n_text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("invalid N '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    if n_list.is_empty() {
        return Err(CliError::Usage("empty N list".into()));
    }
    let costs = args
        .cost
        .or(file.cost)
        .unwrap_or_else(|| vec![CostArg::Stat, CostArg::Fid]);
    let methods = args
        .method
        .or(file.method)
        .unwrap_or_else(|| vec![MethodArg::Auto]);
    let runs = args.runs.or(file.runs).unwrap_or(10_000);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let resolution = args.resolution.or(file.resolution).unwrap_or(32);
    let format = args.format.or(file.format).unwrap_or(FormatArg::Csv);
    let out_dir = args
        .out
        .or(file.out)
        .ok_or_else(|| CliError::Usage("--out is required".into()))?;

    let protocol_kind = match channel_kind.as_str() {
        "depolarizing" => ProtocolKind::DepolarizingSingle,
        "phase-damping" => ProtocolKind::PhaseSingle,
        "amplitude-damping" => ProtocolKind::AmplitudeSingle,
        other => {
            return Err(CliError::Usage(format!(
                "sweep supports the one-parameter channels, not '{other}'"
            )))
        }
    };
    let lambda_points = grid.points()?;
    let lambda_max = if protocol_kind == ProtocolKind::AmplitudeSingle {
        1.0
    } else {
        0.5
    };
    for &l in &lambda_points {
        if !(0.0..=lambda_max).contains(&l) {
            return Err(CliError::Usage(format!(
                "grid value {l} outside [0, {lambda_max}] for {channel_kind}"
            )));
        }
    }

    // (cost, method) pairs in deterministic order; `auto` resolves per cost.
    let mut pairs: Vec<(CostKind, Method)> = Vec::new();
    for cost in &costs {
        for method in &methods {
            let resolved = match method {
                MethodArg::Auto => match cost {
                    CostArg::Stat => Method::ClosedForm,
                    CostArg::Fid => Method::Enumeration,
                },
                MethodArg::Closed => Method::ClosedForm,
                MethodArg::Enum => Method::Enumeration,
                MethodArg::Mc => Method::MonteCarlo,
            };
            if !pairs.contains(&(cost.kind(), resolved)) {
                pairs.push((cost.kind(), resolved));
            }
        }
    }

    let opts = AnalysisOptions {
        resolution,
        ..AnalysisOptions::default()
    };

    // One cell per (n, lambda, cost, method), evaluated in parallel,
    // emitted in grid order.
    let mut cells = Vec::new();
    for &n in &n_list {
        for &l in &lambda_points {
            for &(cost, method) in &pairs {
                cells.push((n, l, cost, method));
            }
        }
    }
    let rows: Vec<Row> = cells
        .par_iter()
        .map(|&(n, l, cost, method)| evaluate_cell(&channel_kind, protocol_kind, n, l, cost, method, runs, seed, &opts))
        .collect::<Result<_, CliError>>()?;

    std::fs::create_dir_all(&out_dir)?;
    let resolved = ResolvedSweep {
        channel: channel_kind.clone(),
        lambda_grid: grid,
        n: n_list,
        cost: costs.iter().map(|c| c.kind().name().to_string()).collect(),
        method: pairs
            .iter()
            .map(|(c, m)| format!("{}:{}", c.name(), m.name()))
            .collect(),
        runs,
        seed,
        resolution,
        format: match format {
            FormatArg::Csv => "csv".into(),
            FormatArg::Json => "json".into(),
        },
    };
    let mut manifest = RunManifest::new("sweep", Some(seed), resolved);
    match format {
        FormatArg::Csv => {
            let header = "channel,cost,method,n,lambda,value,std_error,resolution,status";
            let lines: Vec<String> = rows.iter().map(Row::to_csv).collect();
            manifest.write_output(&out_dir, "sweep.csv", &output::csv_text(header, &lines))?;
        }
        FormatArg::Json => {
            manifest.write_output(&out_dir, "sweep.json", &output::json_text(&rows))?;
        }
    }
    manifest.finalize(&out_dir)?;
    println!(
        "wrote {} rows to {}",
        rows.len(),
        out_dir.join("sweep.*").display()
    );
    Ok(0)
}

/// One output row; `status` is `ok` or an `error:<kind>` marker for cells
/// whose method cannot serve the request (no closed fidelity form,
/// enumeration limits).
#[derive(Debug, Serialize)]
struct Row {
    channel: String,
    cost: String,
    method: String,
    n: u64,
    lambda: f64,
    value: Option<f64>,
    std_error: Option<f64>,
    resolution: Option<u32>,
    status: String,
}

impl Row {
    fn to_csv(&self) -> String {
        let fmt = |v: Option<f64>| v.map(chanest::analysis::format_float).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.channel,
            self.cost,
            self.method,
            self.n,
            chanest::analysis::format_float(self.lambda),
            fmt(self.value),
            fmt(self.std_error),
            self.resolution.map(|r| r.to_string()).unwrap_or_default(),
            self.status
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn evaluate_cell(
    channel_kind: &str,
    protocol_kind: ProtocolKind,
    n: u64,
    lambda: f64,
    cost: CostKind,
    method: Method,
    runs: u64,
    seed: u64,
    opts: &AnalysisOptions,
) -> Result<Row, CliError> {
    let channel = config::build_channel(channel_kind, &[lambda], None)?;
    let spec = ProtocolSpec::new(protocol_kind, n).map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = match method {
        Method::ClosedForm => mean_error_closed(&channel, &spec, cost),
        Method::Enumeration => mean_error_enumerated(&channel, &spec, cost, opts),
        Method::MonteCarlo => mean_error_montecarlo(&channel, &spec, cost, runs, seed, opts),
    };
    Ok(match outcome {
        Ok(report) => row_from_report(&report),
        // Method/size limitations become row markers instead of failures.
        Err(Error::UnsupportedMethod(_)) => error_row(
            channel_kind,
            cost,
            method,
            n,
            lambda,
            "error:unsupported-method",
        ),
        Err(Error::EnumerationTooLarge(_)) => error_row(
            channel_kind,
            cost,
            method,
            n,
            lambda,
            "error:enumeration-too-large",
        ),
        Err(e) => return Err(e.into()),
    })
}

fn row_from_report(report: &MeanErrorReport) -> Row {
    Row {
        channel: report.channel.clone(),
        cost: report.cost.name().into(),
        method: report.method.name().into(),
        n: report.n,
        lambda: report.lambda[0],
        value: Some(report.value),
        std_error: Some(report.std_error),
        resolution: report.resolution,
        status: "ok".into(),
    }
}

fn error_row(
    channel: &str,
    cost: CostKind,
    method: Method,
    n: u64,
    lambda: f64,
    status: &str,
) -> Row {
    Row {
        channel: channel.into(),
        cost: cost.name().into(),
        method: method.name().into(),
        n,
        lambda,
        value: None,
        std_error: None,
        resolution: None,
        status: status.into(),
    }
}
