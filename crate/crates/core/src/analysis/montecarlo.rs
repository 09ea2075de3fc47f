//! Monte-Carlo estimates of protocol mean errors.

use std::collections::HashMap;

use crate::channels::ChannelModel;
use crate::protocols::{estimate, sample_counts_indexed, ProtocolSpec};
use crate::qstate::make_quadrature;
use crate::{Error, Result};

use super::{cost_statistical, AnalysisOptions, CostKind, FidelityCost, MeanErrorReport, Method};

/// Sample mean and standard error of the run cost over `runs` seeded
/// simulations. Reproducible: run `r` draws from generators keyed by
/// `(seed, r, branch)`, so reports are identical for identical seeds.
pub fn mean_error_montecarlo(
    channel: &ChannelModel,
    spec: &ProtocolSpec,
    cost: CostKind,
    runs: u64,
    seed: u64,
    opts: &AnalysisOptions,
) -> Result<MeanErrorReport> {
    if runs == 0 {
        return Err(Error::InvalidConfig("runs must be positive".into()));
    }
    spec.check_channel(channel)?;
    let lambda = channel.free_params();

    let fid = match cost {
        CostKind::Fidelity => {
            let quad = make_quadrature(opts.resolution)?;
            Some(FidelityCost::new(channel, &quad, opts.sanitize)?)
        }
        CostKind::Statistical => None,
    };
    // Fidelity costs depend on the outcome tuple only; memoize per tuple so
    // the quadrature runs once per distinct outcome, not once per run.
    let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for run in 0..runs {
        let counts = sample_counts_indexed(channel, spec, seed, run)?;
        let est = estimate(spec, &counts)?;
        let value = match &fid {
            None => cost_statistical(&lambda, &est.values)?,
            Some(evaluator) => {
                let key: Vec<u64> = counts.branches.iter().flatten().copied().collect();
                match memo.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = evaluator.cost_of_raw(&est.values)?;
                        memo.insert(key, v);
                        v
                    }
                }
            }
        };
        sum += value;
        sum_sq += value * value;
    }
    let mean = sum / runs as f64;
    let std_error = if runs > 1 {
        let variance = ((sum_sq - sum * sum / runs as f64) / (runs as f64 - 1.0)).max(0.0);
        (variance / runs as f64).sqrt()
    } else {
        0.0
    };
    Ok(MeanErrorReport {
        channel: channel.kind().name().into(),
        lambda,
        n: spec.n,
        cost,
        method: Method::MonteCarlo,
        value: mean,
        std_error,
        resolution: fid.as_ref().map(|f| f.resolution()),
        sanitize: fid.as_ref().map(|f| f.sanitize()),
    })
}
