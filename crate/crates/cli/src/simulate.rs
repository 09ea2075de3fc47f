//! `simulate`: finite estimation runs with per-run counts, estimates and
//! costs, plus aggregate means.

use std::path::PathBuf;

use chanest::analysis::{cost_statistical, FidelityCost, SanitizeMode};
use chanest::channels::ChannelModel;
use chanest::protocols::{
    estimate, sample_counts_indexed, ProtocolKind, ProtocolSpec,
};
use chanest::qstate::make_quadrature;
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::manifest::RunManifest;
use crate::output;
use crate::CliError;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Channel kind (depolarizing, phase-damping, amplitude-damping, pauli,
    /// general-affine, generalized-pauli).
    #[arg(long)]
    channel: Option<String>,
    /// Comma-separated channel parameters (row-major for generalized-pauli).
    #[arg(long)]
    lambda: Option<String>,
    /// System dimension (generalized-pauli only).
    #[arg(long)]
    dim: Option<usize>,
    /// Protocol; defaults to the channel's natural protocol
    /// (pauli defaults to pauli-entangled).
    #[arg(long)]
    protocol: Option<String>,
    /// Total qubits per run.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sphere-quadrature resolution for the per-run fidelity cost.
    #[arg(long)]
    resolution: Option<u32>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file mirroring these flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SimulateFileConfig {
    channel: Option<String>,
    lambda: Option<String>,
    dim: Option<usize>,
    protocol: Option<String>,
    n: Option<u64>,
    runs: Option<u64>,
    seed: Option<u64>,
    resolution: Option<u32>,
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct RunRecord {
    run: u64,
    counts: Vec<Vec<u64>>,
    estimate: Vec<f64>,
    physical: bool,
    cost_statistical: f64,
    /// Absent for channels without a qubit fidelity cost (qudits with D > 2).
    #[serde(skip_serializing_if = "Option::is_none")]
    cost_fidelity: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Aggregate {
    mean: f64,
    std_error: f64,
}

#[derive(Debug, Serialize)]
struct SimulationReport {
    channel: ChannelModel,
    protocol: ProtocolSpec,
    runs: u64,
    seed: u64,
    resolution: u32,
    run_records: Vec<RunRecord>,
    statistical: Aggregate,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity: Option<Aggregate>,
}

fn parse_protocol(name: &str) -> Result<ProtocolKind, CliError> {
    Ok(match name {
        "depolarizing-single" => ProtocolKind::DepolarizingSingle,
        "phase-single" => ProtocolKind::PhaseSingle,
        "amplitude-single" => ProtocolKind::AmplitudeSingle,
        "general12" => ProtocolKind::General12,
        "pauli-separable" => ProtocolKind::PauliSeparable,
        "pauli-entangled" => ProtocolKind::PauliEntangled,
        "qudit-pauli-entangled" => ProtocolKind::QuditPauliEntangled,
        other => {
            return Err(CliError::Usage(format!(
                "unknown protocol '{other}'"
            )))
        }
    })
}

pub fn run(args: SimulateArgs) -> Result<i32, CliError> {
    let file: SimulateFileConfig = match &args.config {
        Some(path) => config::load_config_file(path)?,
        None => SimulateFileConfig::default(),
    };
    let channel_kind = args
        .channel
        .or(file.channel)
        .ok_or_else(|| CliError::Usage("--channel is required".into()))?;
    let lambda_text = args
        .lambda
        .or(file.lambda)
        .ok_or_else(|| CliError::Usage("--lambda is required".into()))?;
    let lambda = config::parse_float_list(&lambda_text)?;
    let dim = args.dim.or(file.dim);
    let channel = config::build_channel(&channel_kind, &lambda, dim)?;
    let n = args
        .n
        .or(file.n)
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let runs = args.runs.or(file.runs).unwrap_or(1);
    if runs == 0 {
        return Err(CliError::Usage("--runs must be positive".into()));
    }
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let resolution = args.resolution.or(file.resolution).unwrap_or(32);
    let protocol_kind = match args.protocol.or(file.protocol) {
        Some(name) => parse_protocol(&name)?,
        None => ProtocolKind::for_channel(&channel),
    };
    let spec = ProtocolSpec::with_dim(protocol_kind, n, dim.filter(|_| {
        protocol_kind == ProtocolKind::QuditPauliEntangled
    }))
    .map_err(|e| CliError::Usage(e.to_string()))?;
    spec.check_channel(&channel)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    // Fidelity per run is defined for qubit channels only; generalized
    // Pauli channels join through the dim = 2 correspondence.
    let fidelity = match &channel {
        ChannelModel::GeneralizedPauli { dim, .. } if *dim > 2 => None,
        _ => {
            let quad = make_quadrature(resolution)?;
            Some(FidelityCost::new(&channel, &quad, SanitizeMode::Clamp)?)
        }
    };

    let true_lambda = channel.free_params();
    let mut records = Vec::with_capacity(runs as usize);
    let mut fid_memo: std::collections::HashMap<Vec<u64>, f64> = std::collections::HashMap::new();
    for run in 0..runs {
        let counts = sample_counts_indexed(&channel, &spec, seed, run)?;
        let est = estimate(&spec, &counts)?;
        let cost_stat = cost_statistical(&true_lambda, &est.values)?;
        let cost_fid = match &fidelity {
            None => None,
            Some(evaluator) => {
                let key: Vec<u64> = counts.branches.iter().flatten().copied().collect();
                let value = match fid_memo.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = evaluator.cost_of_raw(&est.values)?;
                        fid_memo.insert(key, v);
                        v
                    }
                };
                Some(value)
            }
        };
        records.push(RunRecord {
            run,
            counts: counts.branches,
            estimate: est.values,
            physical: est.physical,
            cost_statistical: cost_stat,
            cost_fidelity: cost_fid,
        });
    }

    let statistical = aggregate(records.iter().map(|r| r.cost_statistical));
    let fidelity_agg = if fidelity.is_some() {
        Some(aggregate(records.iter().map(|r| {
            r.cost_fidelity.expect("fidelity recorded for every run")
        })))
    } else {
        None
    };

    let report = SimulationReport {
        channel,
        protocol: spec,
        runs,
        seed,
        resolution,
        run_records: records,
        statistical,
        fidelity: fidelity_agg,
    };
    let bytes = output::json_text(&report);
    match args.out.or(file.out) {
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let dir = path.parent().unwrap_or_else(|| std::path::Path::new("."));
            let name = path
                .file_name()
                .ok_or_else(|| CliError::Usage("--out needs a file name".into()))?
                .to_string_lossy()
                .to_string();
            let mut manifest = RunManifest::new(
                "simulate",
                Some(seed),
                serde_json::json!({
                    "channel": channel_kind,
                    "lambda": lambda,
                    "n": n,
                    "runs": runs,
                    "resolution": resolution,
                    "protocol": protocol_kind.name(),
                }),
            );
            manifest.write_output(dir, &name, &bytes)?;
            manifest.finalize(dir)?;
        }
    }
    Ok(0)
}

fn aggregate(values: impl Iterator<Item = f64>) -> Aggregate {
    let values: Vec<f64> = values.collect();
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let std_error = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    Aggregate { mean, std_error }
}
