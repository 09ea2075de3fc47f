//! Exact expectation of run costs by enumeration of the outcome space.
//!
//! The run cost is averaged over every possible outcome tuple, weighted by
//! the exact binomial/multinomial law. Fidelity costs are evaluated from
//! the definition (per-outcome fidelity error of the estimated channel),
//! never from algebraically simplified formulas; the simplifications in
//! [`super::series`] are validated against this route by tests.

use crate::channels::ChannelModel;
use crate::protocols::{outcome_distribution, ProtocolKind, ProtocolSpec};
use crate::qstate::make_quadrature;
use crate::{Error, Result};

use super::{AnalysisOptions, CostKind, FidelityCost, MeanErrorReport, Method};

/// Normalized binomial probability masses `P(i | n, p)` for `i = 0..=n`.
///
/// Computed by the multiplicative recurrence outward from the mode and
/// normalized at the end, which avoids under/overflow of the binomial
/// coefficients for large `n`.
pub fn binomial_weights(n: u64, p: f64) -> Vec<f64> {
    let len = (n + 1) as usize;
    let mut w = vec![0.0; len];
    if p <= 0.0 {
        w[0] = 1.0;
        return w;
    }
    if p >= 1.0 {
        w[len - 1] = 1.0;
        return w;
    }
    let odds = p / (1.0 - p);
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    w[mode] = 1.0;
    for i in mode..len - 1 {
        // w[i+1] / w[i] = (n - i) / (i + 1) * odds
        w[i + 1] = w[i] * ((n - i as u64) as f64 / (i as f64 + 1.0)) * odds;
    }
    for i in (0..mode).rev() {
        w[i] = w[i + 1] * ((i as f64 + 1.0) / (n - i as u64) as f64) / odds;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Multinomial probability of the tally `counts` under `probs`.
/// Valid for totals up to 34 (the coefficient is computed exactly in u128).
pub fn multinomial_weight(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let mut coeff: u128 = 1;
    let mut remaining = total;
    for &c in counts {
        coeff *= choose_u128(remaining, c);
        remaining -= c;
    }
    let mut w = coeff as f64;
    for (&c, &p) in counts.iter().zip(probs) {
        w *= p.powi(c as i32);
    }
    w
}

fn choose_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Exact mean error of the protocol by outcome enumeration.
///
/// Tractability limits (configurable via `opts.limits`): binomial protocols
/// up to `N = 10^4`; the separable Pauli triple sum up to `N = 90`; the
/// entangled multinomial up to `N = 60`. Qudit enumeration is only offered
/// for `dim = 2`; the fidelity cost of the 12-parameter protocol has no
/// tractable enumeration (12-fold product space) and is served by Monte
/// Carlo instead.
pub fn mean_error_enumerated(
    channel: &ChannelModel,
    spec: &ProtocolSpec,
    cost: CostKind,
    opts: &AnalysisOptions,
) -> Result<MeanErrorReport> {
    spec.check_channel(channel)?;
    let dist = outcome_distribution(channel, spec)?;
    let lambda = channel.free_params();
    let trials = spec.trials_per_branch();
    let m = trials as f64;

    let fid = match cost {
        CostKind::Fidelity => {
            if spec.kind == ProtocolKind::General12 {
                return Err(Error::UnsupportedMethod(
                    "no tractable enumeration for the 12-parameter fidelity cost; use monte-carlo"
                        .into(),
                ));
            }
            let quad = make_quadrature(opts.resolution)?;
            Some(FidelityCost::new(channel, &quad, opts.sanitize)?)
        }
        CostKind::Statistical => None,
    };
    let run_cost = |estimate: &[f64]| -> Result<f64> {
        match &fid {
            None => super::cost_statistical(&lambda, estimate),
            Some(evaluator) => evaluator.cost_of_raw(estimate),
        }
    };

    let value = match spec.kind {
        ProtocolKind::DepolarizingSingle
        | ProtocolKind::PhaseSingle
        | ProtocolKind::AmplitudeSingle => {
            check_limit(spec.n, opts.limits.binomial_max_n, "binomial")?;
            let w = binomial_weights(trials, dist[0][1]);
            let mut acc = 0.0;
            for (i, wi) in w.iter().enumerate() {
                acc += wi * run_cost(&[i as f64 / m])?;
            }
            acc
        }
        ProtocolKind::General12 => {
            check_limit(trials, opts.limits.binomial_max_n, "binomial")?;
            // The statistical cost is additive over the 12 independent
            // branches, so the expectation factorizes exactly.
            let mut acc = 0.0;
            for (j, branch) in dist.iter().enumerate() {
                let w = binomial_weights(trials, branch[0]);
                for (u, wu) in w.iter().enumerate() {
                    let diff = lambda[j] - u as f64 / m;
                    acc += wu * diff * diff;
                }
            }
            acc
        }
        ProtocolKind::PauliSeparable => {
            check_limit(spec.n, opts.limits.separable_max_n, "separable")?;
            let wx = binomial_weights(trials, dist[0][1]);
            let wy = binomial_weights(trials, dist[1][1]);
            let wz = binomial_weights(trials, dist[2][1]);
            let mut acc = 0.0;
            for (i1, w1) in wx.iter().enumerate() {
                if *w1 == 0.0 {
                    continue;
                }
                let f1 = i1 as f64 / m;
                for (i2, w2) in wy.iter().enumerate() {
                    let w12 = w1 * w2;
                    if w12 == 0.0 {
                        continue;
                    }
                    let f2 = i2 as f64 / m;
                    for (i3, w3) in wz.iter().enumerate() {
                        let w = w12 * w3;
                        if w == 0.0 {
                            continue;
                        }
                        let f3 = i3 as f64 / m;
                        let est = [
                            0.5 * (f3 - f1 + f2),
                            0.5 * (f1 - f2 + f3),
                            0.5 * (f2 - f3 + f1),
                        ];
                        acc += w * run_cost(&est)?;
                    }
                }
            }
            acc
        }
        ProtocolKind::PauliEntangled => {
            check_limit(spec.n, opts.limits.entangled_max_n, "entangled")?;
            enumerate_four_outcomes(trials, &dist[0], |counts| {
                let est = [
                    counts[0] as f64 / m,
                    counts[1] as f64 / m,
                    counts[2] as f64 / m,
                ];
                run_cost(&est)
            })?
        }
        ProtocolKind::QuditPauliEntangled => {
            if spec.dim != Some(2) {
                return Err(Error::EnumerationTooLarge(
                    "qudit enumeration is gated to dim = 2; use closed form or monte-carlo"
                        .into(),
                ));
            }
            check_limit(spec.n, opts.limits.entangled_max_n, "entangled")?;
            enumerate_four_outcomes(trials, &dist[0], |counts| {
                // Free parameters skip the identity outcome at index 0.
                let est = [
                    counts[1] as f64 / m,
                    counts[2] as f64 / m,
                    counts[3] as f64 / m,
                ];
                run_cost(&est)
            })?
        }
    };

    Ok(MeanErrorReport {
        channel: channel.kind().name().into(),
        lambda,
        n: spec.n,
        cost,
        method: Method::Enumeration,
        value,
        std_error: 0.0,
        resolution: fid.as_ref().map(|f| f.resolution()),
        sanitize: fid.as_ref().map(|f| f.sanitize()),
    })
}

fn check_limit(n: u64, limit: u64, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::EnumerationTooLarge(format!(
            "{what} enumeration limited to N <= {limit}, got {n}"
        )));
    }
    Ok(())
}

/// Sum of `weight * cost(counts)` over all four-outcome tallies of `m`
/// trials.
fn enumerate_four_outcomes<F>(m: u64, probs: &[f64], mut cost: F) -> Result<f64>
where
    F: FnMut(&[u64; 4]) -> Result<f64>,
{
    let mut acc = 0.0;
    for i1 in 0..=m {
        for i2 in 0..=m - i1 {
            for i3 in 0..=m - i1 - i2 {
                let counts = [i1, i2, i3, m - i1 - i2 - i3];
                let w = multinomial_weight(&counts, probs);
                if w == 0.0 {
                    continue;
                }
                acc += w * cost(&counts)?;
            }
        }
    }
    Ok(acc)
}
