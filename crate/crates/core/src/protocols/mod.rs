//! Estimation protocols: probe preparation, measurement-outcome laws,
//! seeded outcome sampling, and frequency-based estimators.
//!
//! Probe states and measurements are fixed per protocol:
//!
//! - one-parameter channels use a single probe direction measured along its
//!   own axis, with the "down" (orthogonal) outcome occurring with
//!   probability `lambda`;
//! - the 12-parameter protocol prepares the four probes with Bloch vectors
//!   `(0,0,-1)`, `(0,0,+1)`, `(1,0,0)`, `(0,1,0)` and measures each along
//!   `x`, `y`, `z`; branch `j` then has spin-up probability exactly
//!   `lambda_j`, which is what makes the parametrization invertible;
//! - the separable Pauli protocol probes the three axes and measures along
//!   the preparation axis; spin-down probabilities are
//!   `(l2+l3, l1+l3, l1+l2)` along `(x, y, z)`;
//! - the entangled protocols share maximally entangled pairs, send one half
//!   through the channel, and project onto the (generalized) Bell basis.

mod bell;
mod sampling;

pub use bell::{bell_basis, check_probe_admissibility, AdmissibilityReport};
pub use sampling::{branch_rng, sample_counts, sample_counts_indexed};

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelKind, ChannelModel};
use crate::qstate::BlochVector;
use crate::{Error, Result};

/// The estimation protocols implemented by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    DepolarizingSingle,
    PhaseSingle,
    AmplitudeSingle,
    General12,
    PauliSeparable,
    PauliEntangled,
    QuditPauliEntangled,
}

impl ProtocolKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::DepolarizingSingle => "depolarizing-single",
            ProtocolKind::PhaseSingle => "phase-single",
            ProtocolKind::AmplitudeSingle => "amplitude-single",
            ProtocolKind::General12 => "general12",
            ProtocolKind::PauliSeparable => "pauli-separable",
            ProtocolKind::PauliEntangled => "pauli-entangled",
            ProtocolKind::QuditPauliEntangled => "qudit-pauli-entangled",
        }
    }

    /// The channel family this protocol estimates.
    pub fn channel_kind(&self) -> ChannelKind {
        match self {
            ProtocolKind::DepolarizingSingle => ChannelKind::Depolarizing,
            ProtocolKind::PhaseSingle => ChannelKind::PhaseDamping,
            ProtocolKind::AmplitudeSingle => ChannelKind::AmplitudeDamping,
            ProtocolKind::General12 => ChannelKind::GeneralAffine,
            ProtocolKind::PauliSeparable | ProtocolKind::PauliEntangled => ChannelKind::Pauli,
            ProtocolKind::QuditPauliEntangled => ChannelKind::GeneralizedPauli,
        }
    }

    /// The natural protocol for a channel family (entangled for Pauli).
    pub fn for_channel(channel: &ChannelModel) -> ProtocolKind {
        match channel.kind() {
            ChannelKind::Depolarizing => ProtocolKind::DepolarizingSingle,
            ChannelKind::PhaseDamping => ProtocolKind::PhaseSingle,
            ChannelKind::AmplitudeDamping => ProtocolKind::AmplitudeSingle,
            ChannelKind::GeneralAffine => ProtocolKind::General12,
            ChannelKind::Pauli => ProtocolKind::PauliEntangled,
            ChannelKind::GeneralizedPauli => ProtocolKind::QuditPauliEntangled,
        }
    }
}

/// A protocol instance: kind, total qubit budget `N`, and the system
/// dimension for the qudit protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim: Option<usize>,
}

impl ProtocolSpec {
    pub fn new(kind: ProtocolKind, n: u64) -> Result<Self> {
        Self::with_dim(kind, n, None)
    }

    pub fn with_dim(kind: ProtocolKind, n: u64, dim: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("N must be positive".into()));
        }
        let divisor = match kind {
            ProtocolKind::DepolarizingSingle
            | ProtocolKind::PhaseSingle
            | ProtocolKind::AmplitudeSingle => 1,
            ProtocolKind::General12 => 12,
            ProtocolKind::PauliSeparable => 3,
            ProtocolKind::PauliEntangled | ProtocolKind::QuditPauliEntangled => 2,
        };
        if n % divisor != 0 {
            return Err(Error::InvalidConfig(format!(
                "{} requires N divisible by {divisor}, got {n}",
                kind.name()
            )));
        }
        match kind {
            ProtocolKind::QuditPauliEntangled => {
                let d = dim.ok_or_else(|| {
                    Error::InvalidConfig("qudit protocol needs a dimension".into())
                })?;
                if d < 2 {
                    return Err(Error::InvalidConfig(format!("dimension {d} < 2")));
                }
            }
            _ => {
                if dim.is_some() {
                    return Err(Error::InvalidConfig(format!(
                        "{} does not take a dimension",
                        kind.name()
                    )));
                }
            }
        }
        Ok(Self { kind, n, dim })
    }

    /// Number of independent measurement branches.
    pub fn branch_count(&self) -> usize {
        match self.kind {
            ProtocolKind::DepolarizingSingle
            | ProtocolKind::PhaseSingle
            | ProtocolKind::AmplitudeSingle
            | ProtocolKind::PauliEntangled
            | ProtocolKind::QuditPauliEntangled => 1,
            ProtocolKind::General12 => 12,
            ProtocolKind::PauliSeparable => 3,
        }
    }

    /// Measurements performed in each branch.
    pub fn trials_per_branch(&self) -> u64 {
        match self.kind {
            ProtocolKind::DepolarizingSingle
            | ProtocolKind::PhaseSingle
            | ProtocolKind::AmplitudeSingle => self.n,
            ProtocolKind::General12 => self.n / 12,
            ProtocolKind::PauliSeparable => self.n / 3,
            ProtocolKind::PauliEntangled | ProtocolKind::QuditPauliEntangled => self.n / 2,
        }
    }

    /// Checks that `channel` belongs to the family this protocol estimates.
    pub fn check_channel(&self, channel: &ChannelModel) -> Result<()> {
        if channel.kind() != self.kind.channel_kind() {
            return Err(Error::FamilyMismatch {
                expected: self.kind.channel_kind().name().into(),
                got: channel.kind().name().into(),
            });
        }
        if let ChannelModel::GeneralizedPauli { dim, .. } = channel {
            if Some(*dim) != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "protocol dimension {:?} vs channel dimension {dim}",
                    self.dim
                )));
            }
        }
        channel.validate()
    }
}

/// Integer outcome tallies, one vector per branch. Each branch's tallies sum
/// to the number of measurements in that branch.
///
/// Branch outcome ordering:
/// - two-outcome branches are `[up, down]` (for the 12-parameter protocol,
///   "up" along the measured axis);
/// - the entangled Pauli branch is `[phi-, phi+, psi+, psi-]`;
/// - the qudit branch lists the generalized Bell outcomes row-major in
///   `(alpha, beta)` starting from `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub branches: Vec<Vec<u64>>,
}

impl OutcomeCounts {
    /// Validates branch count and per-branch totals against `spec`.
    pub fn check_against(&self, spec: &ProtocolSpec) -> Result<()> {
        if self.branches.len() != spec.branch_count() {
            return Err(Error::Protocol(format!(
                "expected {} branches, got {}",
                spec.branch_count(),
                self.branches.len()
            )));
        }
        let trials = spec.trials_per_branch();
        let outcomes = branch_outcome_count(spec);
        for (i, branch) in self.branches.iter().enumerate() {
            if branch.len() != outcomes {
                return Err(Error::Protocol(format!(
                    "branch {i} has {} outcome slots, expected {outcomes}",
                    branch.len()
                )));
            }
            let total: u64 = branch.iter().sum();
            if total != trials {
                return Err(Error::Protocol(format!(
                    "branch {i} tallies sum to {total}, expected {trials}"
                )));
            }
        }
        Ok(())
    }
}

fn branch_outcome_count(spec: &ProtocolSpec) -> usize {
    match spec.kind {
        ProtocolKind::PauliEntangled => 4,
        ProtocolKind::QuditPauliEntangled => {
            let d = spec.dim.unwrap_or(2);
            d * d
        }
        _ => 2,
    }
}

/// A parameter estimate together with a flag marking whether it lies inside
/// the family's parameter range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub values: Vec<f64>,
    pub physical: bool,
}

/// Exact per-branch outcome probabilities of `protocol` run against
/// `channel`. Each branch vector sums to 1; the ordering matches
/// [`OutcomeCounts`].
pub fn outcome_distribution(
    channel: &ChannelModel,
    spec: &ProtocolSpec,
) -> Result<Vec<Vec<f64>>> {
    spec.check_channel(channel)?;
    match spec.kind {
        ProtocolKind::DepolarizingSingle
        | ProtocolKind::PhaseSingle
        | ProtocolKind::AmplitudeSingle => {
            let probe = match spec.kind {
                ProtocolKind::DepolarizingSingle => BlochVector::new(0.0, 0.0, 1.0),
                ProtocolKind::PhaseSingle => BlochVector::new(1.0, 0.0, 0.0),
                // The excited state; the "down" outcome is its antipode.
                _ => BlochVector::new(0.0, 0.0, -1.0),
            };
            let out = channel.apply(&probe)?;
            let p_down = clamp_prob(0.5 * (1.0 - probe.dot(&out)));
            Ok(vec![vec![1.0 - p_down, p_down]])
        }
        ProtocolKind::General12 => {
            let probes = [
                BlochVector::new(0.0, 0.0, -1.0),
                BlochVector::new(0.0, 0.0, 1.0),
                BlochVector::new(1.0, 0.0, 0.0),
                BlochVector::new(0.0, 1.0, 0.0),
            ];
            let mut branches = Vec::with_capacity(12);
            for probe in &probes {
                let out = channel.apply(probe)?;
                for component in [out.s1, out.s2, out.s3] {
                    let p_up = clamp_prob(0.5 * (1.0 + component));
                    branches.push(vec![p_up, 1.0 - p_up]);
                }
            }
            Ok(branches)
        }
        ProtocolKind::PauliSeparable => {
            let axes = [
                BlochVector::new(1.0, 0.0, 0.0),
                BlochVector::new(0.0, 1.0, 0.0),
                BlochVector::new(0.0, 0.0, 1.0),
            ];
            let mut branches = Vec::with_capacity(3);
            for axis in &axes {
                let out = channel.apply(axis)?;
                let p_down = clamp_prob(0.5 * (1.0 - axis.dot(&out)));
                branches.push(vec![1.0 - p_down, p_down]);
            }
            Ok(branches)
        }
        ProtocolKind::PauliEntangled => {
            let ChannelModel::Pauli { lambda } = channel else {
                unreachable!("family checked above");
            };
            let rest = (1.0 - lambda[0] - lambda[1] - lambda[2]).max(0.0);
            Ok(vec![vec![lambda[0], lambda[1], lambda[2], rest]])
        }
        ProtocolKind::QuditPauliEntangled => {
            let ChannelModel::GeneralizedPauli { lambda, .. } = channel else {
                unreachable!("family checked above");
            };
            let flat: Vec<f64> = lambda.iter().flatten().copied().collect();
            Ok(vec![flat])
        }
    }
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Frequency-based estimator mapping outcome counts to a parameter estimate.
///
/// Estimates are reported raw: the separable Pauli inversion can produce
/// negative components, and one-parameter estimates `i / N` can exceed the
/// family range. The `physical` flag records whether the estimate lies in
/// range.
pub fn estimate(spec: &ProtocolSpec, counts: &OutcomeCounts) -> Result<Estimate> {
    counts.check_against(spec)?;
    let trials = spec.trials_per_branch() as f64;
    match spec.kind {
        ProtocolKind::DepolarizingSingle
        | ProtocolKind::PhaseSingle
        | ProtocolKind::AmplitudeSingle => {
            let est = counts.branches[0][1] as f64 / trials;
            let max = if spec.kind == ProtocolKind::AmplitudeSingle {
                1.0
            } else {
                0.5
            };
            Ok(Estimate {
                values: vec![est],
                physical: est <= max,
            })
        }
        ProtocolKind::General12 => {
            let values: Vec<f64> = counts
                .branches
                .iter()
                .map(|b| b[0] as f64 / trials)
                .collect();
            Ok(Estimate {
                values,
                physical: true,
            })
        }
        ProtocolKind::PauliSeparable => {
            let f1 = counts.branches[0][1] as f64 / trials; // down along x
            let f2 = counts.branches[1][1] as f64 / trials; // down along y
            let f3 = counts.branches[2][1] as f64 / trials; // down along z
            let values = vec![
                0.5 * (f3 - f1 + f2),
                0.5 * (f1 - f2 + f3),
                0.5 * (f2 - f3 + f1),
            ];
            let sum: f64 = values.iter().sum();
            let physical = values.iter().all(|&l| l >= 0.0) && sum <= 1.0;
            Ok(Estimate { values, physical })
        }
        ProtocolKind::PauliEntangled => {
            let values: Vec<f64> = counts.branches[0][..3]
                .iter()
                .map(|&i| i as f64 / trials)
                .collect();
            let sum: f64 = values.iter().sum();
            Ok(Estimate {
                values,
                physical: sum <= 1.0,
            })
        }
        ProtocolKind::QuditPauliEntangled => {
            let values: Vec<f64> = counts.branches[0][1..]
                .iter()
                .map(|&i| i as f64 / trials)
                .collect();
            let sum: f64 = values.iter().sum();
            Ok(Estimate {
                values,
                physical: sum <= 1.0,
            })
        }
    }
}
