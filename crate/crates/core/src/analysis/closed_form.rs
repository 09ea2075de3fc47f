//! Closed-form mean statistical errors per protocol.
//!
//! Every protocol whose estimates are raw outcome frequencies obeys the
//! universal form `(L / N) sum_i lambda_i (1 - lambda_i)` with a
//! protocol-specific constant `L` (see [`universal_l`]); the separable
//! Pauli protocol, whose estimator is a linear inversion of the
//! frequencies instead, has its own closed form.

use crate::channels::ChannelModel;
use crate::protocols::{ProtocolKind, ProtocolSpec};
use crate::{Error, Result};

use super::{CostKind, MeanErrorReport, Method};

/// Exact mean statistical error of the protocol. No closed form exists for
/// the fidelity cost; use enumeration or Monte Carlo there.
pub fn mean_error_closed(
    channel: &ChannelModel,
    spec: &ProtocolSpec,
    cost: CostKind,
) -> Result<MeanErrorReport> {
    if cost == CostKind::Fidelity {
        return Err(Error::UnsupportedMethod(
            "no closed form for the fidelity cost; use enumeration".into(),
        ));
    }
    spec.check_channel(channel)?;
    let lambda = channel.free_params();
    let n = spec.n as f64;
    let value = match spec.kind {
        ProtocolKind::DepolarizingSingle
        | ProtocolKind::PhaseSingle
        | ProtocolKind::AmplitudeSingle => lambda[0] * (1.0 - lambda[0]) / n,
        ProtocolKind::General12 => {
            12.0 / n * lambda.iter().map(|l| l * (1.0 - l)).sum::<f64>()
        }
        ProtocolKind::PauliSeparable => {
            let (l1, l2, l3) = (lambda[0], lambda[1], lambda[2]);
            9.0 / (2.0 * n)
                * (l1 * (1.0 - l1 - l2) + l2 * (1.0 - l2 - l3) + l3 * (1.0 - l3 - l1))
        }
        ProtocolKind::PauliEntangled | ProtocolKind::QuditPauliEntangled => {
            2.0 / n * lambda.iter().map(|l| l * (1.0 - l)).sum::<f64>()
        }
    };
    Ok(MeanErrorReport {
        channel: channel.kind().name().into(),
        lambda,
        n: spec.n,
        cost,
        method: Method::ClosedForm,
        value,
        std_error: 0.0,
        resolution: None,
        sanitize: None,
    })
}

/// The constant `L` of the universal form `(L / N) sum lambda_i (1 -
/// lambda_i)`, defined for protocols whose estimates are raw frequencies.
/// `None` for the separable Pauli protocol.
pub fn universal_l(kind: ProtocolKind) -> Option<f64> {
    match kind {
        ProtocolKind::DepolarizingSingle
        | ProtocolKind::PhaseSingle
        | ProtocolKind::AmplitudeSingle => Some(1.0),
        ProtocolKind::General12 => Some(12.0),
        ProtocolKind::PauliEntangled | ProtocolKind::QuditPauliEntangled => Some(2.0),
        ProtocolKind::PauliSeparable => None,
    }
}

/// Closed form of the separable-minus-entangled statistical gap,
/// `(1 / 2N) [5 (1 - sum) sum + l1 l2 + l2 l3 + l3 l1] >= 0`.
pub fn delta_statistical_closed(lambda: &[f64; 3], n: u64) -> f64 {
    let total: f64 = lambda.iter().sum();
    let pairwise = lambda[0] * lambda[1] + lambda[1] * lambda[2] + lambda[2] * lambda[0];
    (5.0 * (1.0 - total) * total + pairwise) / (2.0 * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn depolarizing_closed_form() {
        let c = ChannelModel::depolarizing(0.5).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::DepolarizingSingle, 10).unwrap();
        let report = mean_error_closed(&c, &spec, CostKind::Statistical).unwrap();
        assert_abs_diff_eq!(report.value, 0.025, epsilon = 1e-15);
        assert_eq!(report.std_error, 0.0);
    }

    #[test]
    fn pauli_comparison_values() {
        let c = ChannelModel::pauli([0.25; 3]).unwrap();
        let sep = ProtocolSpec::new(ProtocolKind::PauliSeparable, 12).unwrap();
        let ent = ProtocolSpec::new(ProtocolKind::PauliEntangled, 12).unwrap();
        let sep_err = mean_error_closed(&c, &sep, CostKind::Statistical).unwrap();
        let ent_err = mean_error_closed(&c, &ent, CostKind::Statistical).unwrap();
        assert_abs_diff_eq!(sep_err.value, 0.140625, epsilon = 1e-15);
        assert_abs_diff_eq!(ent_err.value, 0.09375, epsilon = 1e-15);
        assert_abs_diff_eq!(
            sep_err.value - ent_err.value,
            delta_statistical_closed(&[0.25; 3], 12),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            delta_statistical_closed(&[0.25; 3], 12),
            0.046875,
            epsilon = 1e-15
        );
    }

    #[test]
    fn noiseless_channel_costs_nothing() {
        let c = ChannelModel::amplitude_damping(0.0).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::AmplitudeSingle, 7).unwrap();
        let report = mean_error_closed(&c, &spec, CostKind::Statistical).unwrap();
        assert_eq!(report.value, 0.0);
    }

    #[test]
    fn fidelity_has_no_closed_form() {
        let c = ChannelModel::depolarizing(0.1).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::DepolarizingSingle, 10).unwrap();
        assert!(matches!(
            mean_error_closed(&c, &spec, CostKind::Fidelity),
            Err(Error::UnsupportedMethod(_))
        ));
    }

    #[test]
    fn qudit_closed_form_skips_identity_entry() {
        let lambda = vec![
            vec![0.7, 0.1, 0.05],
            vec![0.05, 0.02, 0.03],
            vec![0.01, 0.02, 0.02],
        ];
        let c = ChannelModel::generalized_pauli(3, lambda.clone()).unwrap();
        let spec = ProtocolSpec::with_dim(ProtocolKind::QuditPauliEntangled, 100, Some(3)).unwrap();
        let report = mean_error_closed(&c, &spec, CostKind::Statistical).unwrap();
        let expected: f64 = lambda
            .iter()
            .enumerate()
            .flat_map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .filter(move |(b, _)| a != 0 || *b != 0)
                    .map(|(_, &l)| l * (1.0 - l))
            })
            .sum::<f64>()
            * 2.0
            / 100.0;
        assert_abs_diff_eq!(report.value, expected, epsilon = 1e-15);
    }

    #[test]
    fn universal_constants() {
        assert_eq!(universal_l(ProtocolKind::DepolarizingSingle), Some(1.0));
        assert_eq!(universal_l(ProtocolKind::General12), Some(12.0));
        assert_eq!(universal_l(ProtocolKind::PauliEntangled), Some(2.0));
        assert_eq!(universal_l(ProtocolKind::QuditPauliEntangled), Some(2.0));
        assert_eq!(universal_l(ProtocolKind::PauliSeparable), None);
    }
}
