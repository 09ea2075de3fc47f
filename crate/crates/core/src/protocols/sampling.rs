//! Seeded, reproducible sampling of finite-run measurement outcomes.
//!
//! Every branch of every run draws from its own generator, keyed by
//! `(seed, run index, branch index)`. Adding branches or runs therefore
//! never perturbs the streams of earlier ones, and runs can be evaluated
//! in any order or in parallel.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::channels::ChannelModel;
use crate::Result;

use super::{outcome_distribution, OutcomeCounts, ProtocolSpec};

/// Generator for one `(seed, run, branch)` cell of the sampling grid.
pub fn branch_rng(seed: u64, run: u64, branch: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&run.to_le_bytes());
    key[16..24].copy_from_slice(&branch.to_le_bytes());
    key[24..].copy_from_slice(b"chanbrch");
    ChaCha8Rng::from_seed(key)
}

/// Samples one protocol run: each branch's tallies are drawn from the exact
/// binomial/multinomial outcome law. Identical seeds yield identical counts.
pub fn sample_counts(
    channel: &ChannelModel,
    spec: &ProtocolSpec,
    seed: u64,
) -> Result<OutcomeCounts> {
    sample_counts_indexed(channel, spec, seed, 0)
}

/// Samples the run with index `run` of a multi-run experiment.
pub fn sample_counts_indexed(
    channel: &ChannelModel,
    spec: &ProtocolSpec,
    seed: u64,
    run: u64,
) -> Result<OutcomeCounts> {
    let dist = outcome_distribution(channel, spec)?;
    let trials = spec.trials_per_branch();
    let branches = dist
        .iter()
        .enumerate()
        .map(|(b, probs)| {
            let mut rng = branch_rng(seed, run, b as u64);
            sample_multinomial(&mut rng, trials, probs)
        })
        .collect();
    Ok(OutcomeCounts { branches })
}

/// Multinomial draw by sequential conditional binomials.
fn sample_multinomial(rng: &mut impl Rng, trials: u64, probs: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_trials = trials;
    let mut remaining_prob = 1.0;
    for (slot, &p) in probs.iter().enumerate() {
        if slot == probs.len() - 1 {
            counts[slot] = remaining_trials;
            break;
        }
        if remaining_trials == 0 {
            break;
        }
        let conditional = if remaining_prob <= 0.0 {
            0.0
        } else {
            (p / remaining_prob).clamp(0.0, 1.0)
        };
        let draw = if conditional >= 1.0 {
            remaining_trials
        } else if conditional <= 0.0 {
            0
        } else {
            Binomial::new(remaining_trials, conditional)
                .expect("conditional probability in [0, 1]")
                .sample(rng)
        };
        counts[slot] = draw;
        remaining_trials -= draw;
        remaining_prob -= p;
    }
    counts
}
