//! Cost functions and protocol mean errors.
//!
//! Two costs measure the quality of a single estimation run:
//!
//! - the statistical error, the squared Euclidean distance between the true
//!   and estimated parameter vectors;
//! - the fidelity error, one minus the average state fidelity between the
//!   true and estimated channels over pure input states.
//!
//! Protocol quality is the expectation of the run cost over the outcome law,
//! available through three routes that cross-validate each other: closed
//! forms ([`mean_error_closed`]), exact enumeration of the outcome space
//! ([`mean_error_enumerated`]), and seeded Monte-Carlo sampling
//! ([`mean_error_montecarlo`]).

mod closed_form;
mod delta;
mod enumeration;
mod montecarlo;
pub mod series;

pub use closed_form::{delta_statistical_closed, mean_error_closed, universal_l};
pub use delta::delta;
pub use enumeration::{binomial_weights, mean_error_enumerated, multinomial_weight};
pub use montecarlo::mean_error_montecarlo;

use serde::{Deserialize, Serialize};

use crate::channels::{unit_action_with_radicand, ChannelKind, ChannelModel};
use crate::qstate::{BlochVector, SphereQuadrature};
use crate::{Error, Result};

/// Which cost function a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Statistical,
    Fidelity,
}

impl CostKind {
    pub fn name(&self) -> &'static str {
        match self {
            CostKind::Statistical => "statistical",
            CostKind::Fidelity => "fidelity",
        }
    }
}

/// Which evaluation route produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Enumeration,
    MonteCarlo,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Enumeration => "enumeration",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

/// How unphysical estimates are treated inside the fidelity cost.
///
/// `Clamp` evaluates the estimated channel with its raw parameters and
/// clamps each fidelity radicand at zero. `Project` first projects the
/// estimate onto the family's parameter range (Euclidean projection for the
/// Pauli simplex, interval clamping for one-parameter families).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SanitizeMode {
    #[default]
    Clamp,
    Project,
}

/// Enumeration tractability limits (total qubits N per protocol).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub binomial_max_n: u64,
    pub separable_max_n: u64,
    pub entangled_max_n: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            binomial_max_n: 10_000,
            separable_max_n: 90,
            entangled_max_n: 60,
        }
    }
}

/// Options shared by the enumeration and Monte-Carlo routes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub limits: EnumerationLimits,
    /// Sphere-quadrature resolution for fidelity costs.
    pub resolution: u32,
    pub sanitize: SanitizeMode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            limits: EnumerationLimits::default(),
            resolution: 32,
            sanitize: SanitizeMode::Clamp,
        }
    }
}

/// A protocol mean error: channel, resources, cost kind, evaluation route,
/// value, and (for Monte Carlo) the standard error of the mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanErrorReport {
    pub channel: String,
    pub lambda: Vec<f64>,
    pub n: u64,
    pub cost: CostKind,
    pub method: Method,
    pub value: f64,
    pub std_error: f64,
    /// Quadrature resolution used; present for fidelity costs only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resolution: Option<u32>,
    /// Sanitization applied to unphysical estimates (fidelity costs only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sanitize: Option<SanitizeMode>,
}

impl MeanErrorReport {
    /// CSV header matching [`Self::to_csv_row`]; `arity` is the number of
    /// channel parameters.
    pub fn csv_header(arity: usize) -> String {
        let lambdas: Vec<String> = if arity == 1 {
            vec!["lambda".into()]
        } else {
            (1..=arity).map(|i| format!("lambda{i}")).collect()
        };
        format!("channel,cost,method,n,{},value,std_error", lambdas.join(","))
    }

    /// One CSV row: `channel,cost,method,n,lambda...,value,std_error` with
    /// floats at 17 significant digits.
    pub fn to_csv_row(&self) -> String {
        let lambdas: Vec<String> = self.lambda.iter().map(|l| format_float(*l)).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.channel,
            self.cost.name(),
            self.method.name(),
            self.n,
            lambdas.join(","),
            format_float(self.value),
            format_float(self.std_error)
        )
    }
}

/// Difference between the separable and entangled Pauli protocol mean
/// errors at equal resources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub lambda: [f64; 3],
    pub n: u64,
    pub cost: CostKind,
    pub value: f64,
}

/// Floats with 17 significant digits round-trip exactly through decimal.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Squared Euclidean distance between parameter vectors.
pub fn cost_statistical(lambda: &[f64], estimate: &[f64]) -> Result<f64> {
    if lambda.len() != estimate.len() {
        return Err(Error::DimensionMismatch(format!(
            "parameter vectors of length {} and {}",
            lambda.len(),
            estimate.len()
        )));
    }
    Ok(lambda
        .iter()
        .zip(estimate)
        .map(|(a, b)| (a - b) * (a - b))
        .sum())
}

/// Average state fidelity between two channels over pure input states,
/// evaluated by sphere quadrature. Symmetric; 1 for identical channels.
pub fn channel_overlap(
    c1: &ChannelModel,
    c2: &ChannelModel,
    quad: &SphereQuadrature,
) -> Result<f64> {
    let (k1, p1) = action_spec(c1)?;
    let (k2, p2) = action_spec(c2)?;
    Ok(quad.integrate(|n| {
        let (out1, r1) = unit_action_with_radicand(k1, &p1, n);
        let (out2, r2) = unit_action_with_radicand(k2, &p2, n);
        pure_input_fidelity(&out1, r1, &out2, r2)
    }))
}

/// Fidelity of two channel outputs for the same pure input, from the Bloch
/// formula with precomputed radicands.
fn pure_input_fidelity(s1: &BlochVector, r1: f64, s2: &BlochVector, r2: f64) -> f64 {
    (0.5 * (1.0 + s1.dot(s2) + (r1 * r2).sqrt())).clamp(0.0, 1.0)
}

/// Fidelity error `1 - overlap(c_true, c_est)` between two channels of the
/// same family.
pub fn cost_fidelity(
    c_true: &ChannelModel,
    c_est: &ChannelModel,
    quad: &SphereQuadrature,
) -> Result<f64> {
    if c_true.kind() != c_est.kind() {
        return Err(Error::FamilyMismatch {
            expected: c_true.kind().name().into(),
            got: c_est.kind().name().into(),
        });
    }
    Ok((1.0 - channel_overlap(c_true, c_est, quad)?).max(0.0))
}

fn action_spec(c: &ChannelModel) -> Result<(ChannelKind, Vec<f64>)> {
    c.validate()?;
    let kind = c.kind();
    let params = fidelity_action_params(kind, &c.free_params())?;
    Ok((kind, params))
}

/// Maps a family's free-parameter vector to the layout expected by
/// [`bloch_action`]. The generalized Pauli family is accepted only for
/// `dim = 2` (free order `(0,1), (1,0), (1,1)` maps to the Pauli triple
/// `(x, y, z)` as `(0,1) -> x`, `(1,1) -> y`, `(1,0) -> z`).
fn fidelity_action_params(kind: ChannelKind, free: &[f64]) -> Result<Vec<f64>> {
    match kind {
        ChannelKind::GeneralizedPauli => {
            if free.len() != 3 {
                return Err(Error::UnsupportedMethod(
                    "fidelity cost is only defined for qubit channels (dim = 2)".into(),
                ));
            }
            Ok(vec![free[0], free[2], free[1]])
        }
        _ => Ok(free.to_vec()),
    }
}

/// Evaluates the fidelity cost of raw (possibly unphysical) parameter
/// estimates against a fixed true channel.
///
/// The true channel's outputs at the quadrature nodes are precomputed, so
/// repeated calls during enumeration or Monte-Carlo averaging only pay for
/// the estimated channel.
pub struct FidelityCost {
    kind: ChannelKind,
    /// Per node: true-channel output, its radicand, and the quadrature weight.
    true_outputs: Vec<(BlochVector, f64, f64)>,
    quad_points: Vec<BlochVector>,
    sanitize: SanitizeMode,
    resolution: u32,
}

impl FidelityCost {
    pub fn new(
        c_true: &ChannelModel,
        quad: &SphereQuadrature,
        sanitize: SanitizeMode,
    ) -> Result<Self> {
        let (kind, params) = action_spec(c_true)?;
        let true_outputs: Vec<(BlochVector, f64, f64)> = quad
            .points()
            .iter()
            .map(|(n, w)| {
                let (out, r) = unit_action_with_radicand(kind, &params, n);
                (out, r, *w)
            })
            .collect();
        Ok(Self {
            kind,
            true_outputs,
            quad_points: quad.points().iter().map(|(n, _)| *n).collect(),
            sanitize,
            resolution: quad.resolution(),
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn sanitize(&self) -> SanitizeMode {
        self.sanitize
    }

    /// Fidelity cost of the estimate given in the family's free-parameter
    /// order.
    pub fn cost_of_raw(&self, estimate: &[f64]) -> Result<f64> {
        let raw = fidelity_action_params(self.kind, estimate)?;
        let params = match self.sanitize {
            SanitizeMode::Clamp => raw,
            SanitizeMode::Project => project_to_range(self.kind, &raw),
        };
        let mut overlap = 0.0;
        for ((out_true, r_true, w), n) in self.true_outputs.iter().zip(&self.quad_points) {
            let (out_est, r_est) = unit_action_with_radicand(self.kind, &params, n);
            overlap += w * pure_input_fidelity(out_true, *r_true, &out_est, r_est);
        }
        Ok((1.0 - overlap).max(0.0))
    }

    /// Fidelity cost of a validated channel model of the same family.
    pub fn cost_of_model(&self, c_est: &ChannelModel) -> Result<f64> {
        if c_est.kind() != self.kind {
            return Err(Error::FamilyMismatch {
                expected: self.kind.name().into(),
                got: c_est.kind().name().into(),
            });
        }
        c_est.validate()?;
        self.cost_of_raw(&c_est.free_params())
    }
}

/// Projects raw parameters onto the family's range (see [`SanitizeMode`]).
/// Inputs are in [`bloch_action`] layout.
fn project_to_range(kind: ChannelKind, raw: &[f64]) -> Vec<f64> {
    match kind {
        ChannelKind::Depolarizing | ChannelKind::PhaseDamping => vec![raw[0].clamp(0.0, 0.5)],
        ChannelKind::AmplitudeDamping => vec![raw[0].clamp(0.0, 1.0)],
        ChannelKind::Pauli | ChannelKind::GeneralizedPauli => project_to_subsimplex(raw),
        // 12-parameter estimates are frequencies, already in range.
        ChannelKind::GeneralAffine => raw.to_vec(),
    }
}

/// Euclidean projection onto `{x_i >= 0, sum x_i <= 1}`.
fn project_to_subsimplex(x: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= 1.0 {
        return clipped;
    }
    // Projection onto the unit simplex by the sorting algorithm.
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (i as f64 + 1.0);
        if v - candidate > 0.0 {
            threshold = candidate;
        }
    }
    x.iter().map(|&v| (v - threshold).max(0.0)).collect()
}

/// Closed-form channel overlaps for the one-parameter families, valid for
/// true and estimated parameters in `[0, 1]`. Cross-validates the
/// quadrature route.
pub fn overlap_one_param(kind: ChannelKind, l: f64, le: f64) -> Result<f64> {
    let cross = (l * (1.0 - l)).max(0.0) * (le * (1.0 - le)).max(0.0);
    match kind {
        ChannelKind::Depolarizing => {
            let a = (l * le).max(0.0).sqrt();
            let b = ((1.0 - l) * (1.0 - le)).max(0.0).sqrt();
            Ok((a + b) * (a + b))
        }
        ChannelKind::PhaseDamping => Ok(1.0 - 2.0 / 3.0 * l - 2.0 / 3.0 * le
            + 4.0 / 3.0 * l * le
            + 4.0 / 3.0 * cross.sqrt()),
        ChannelKind::AmplitudeDamping => Ok((4.0 + 2.0 * ((1.0 - l) * (1.0 - le)).max(0.0).sqrt()
            - l
            - le
            + 4.0 * l * le
            + 4.0 * cross.sqrt())
            / 6.0),
        other => Err(Error::UnsupportedMethod(format!(
            "no closed-form overlap for {}",
            other.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::make_quadrature;
    use approx::assert_abs_diff_eq;

    #[test]
    fn statistical_cost_examples() {
        assert_abs_diff_eq!(cost_statistical(&[0.2], &[0.2]).unwrap(), 0.0);
        assert_abs_diff_eq!(cost_statistical(&[0.5], &[0.3]).unwrap(), 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(
            cost_statistical(&[0.1, 0.2, 0.3], &[0.4, 0.2, 0.0]).unwrap(),
            0.18,
            epsilon = 1e-15
        );
        assert!(cost_statistical(&[0.1], &[0.1, 0.2]).is_err());
    }

    #[test]
    fn identical_channels_have_zero_fidelity_cost() {
        let quad = make_quadrature(16).unwrap();
        for c in [
            ChannelModel::depolarizing(0.3).unwrap(),
            ChannelModel::phase_damping(0.2).unwrap(),
            ChannelModel::amplitude_damping(0.7).unwrap(),
            ChannelModel::pauli([0.2, 0.1, 0.05]).unwrap(),
        ] {
            let cost = cost_fidelity(&c, &c, &quad).unwrap();
            assert!(cost.abs() < 1e-12, "cost {cost} for {c:?}");
        }
    }

    #[test]
    fn phase_damping_half_vs_zero() {
        // Overlap 1 - (2/3)(0.5) = 2/3 when the estimate is zero.
        let quad = make_quadrature(32).unwrap();
        let c_true = ChannelModel::phase_damping(0.5).unwrap();
        let c_est = ChannelModel::phase_damping(0.0).unwrap();
        let cost = cost_fidelity(&c_true, &c_est, &quad).unwrap();
        assert_abs_diff_eq!(cost, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn depolarizing_half_vs_zero() {
        let quad = make_quadrature(32).unwrap();
        let c_true = ChannelModel::depolarizing(0.5).unwrap();
        let c_est = ChannelModel::depolarizing(0.0).unwrap();
        let cost = cost_fidelity(&c_true, &c_est, &quad).unwrap();
        assert_abs_diff_eq!(cost, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn family_mismatch_rejected() {
        let quad = make_quadrature(8).unwrap();
        let a = ChannelModel::depolarizing(0.1).unwrap();
        let b = ChannelModel::phase_damping(0.1).unwrap();
        assert!(cost_fidelity(&a, &b, &quad).is_err());
    }

    #[test]
    fn overlap_is_symmetric_and_one_on_identity() {
        let quad = make_quadrature(16).unwrap();
        let a = ChannelModel::pauli([0.15, 0.1, 0.2]).unwrap();
        let b = ChannelModel::pauli([0.05, 0.3, 0.1]).unwrap();
        let ab = channel_overlap(&a, &b, &quad).unwrap();
        let ba = channel_overlap(&b, &a, &quad).unwrap();
        assert_abs_diff_eq!(ab, ba, epsilon = 1e-12);
        assert_abs_diff_eq!(channel_overlap(&a, &a, &quad).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_form_overlaps() {
        let quad = make_quadrature(32).unwrap();
        let grid = [0.0, 0.1, 0.35, 0.5];
        for &l in &grid {
            for &le in &[0.0, 0.2, 0.6, 1.0] {
                for kind in [
                    ChannelKind::Depolarizing,
                    ChannelKind::PhaseDamping,
                    ChannelKind::AmplitudeDamping,
                ] {
                    let l = if kind == ChannelKind::AmplitudeDamping {
                        l * 2.0
                    } else {
                        l
                    };
                    let c_true = match kind {
                        ChannelKind::Depolarizing => ChannelModel::depolarizing(l),
                        ChannelKind::PhaseDamping => ChannelModel::phase_damping(l),
                        _ => ChannelModel::amplitude_damping(l),
                    }
                    .unwrap();
                    let evaluator =
                        FidelityCost::new(&c_true, &quad, SanitizeMode::Clamp).unwrap();
                    let by_quadrature = 1.0 - evaluator.cost_of_raw(&[le]).unwrap();
                    let closed = overlap_one_param(kind, l, le).unwrap();
                    assert!(
                        (by_quadrature - closed).abs() < 1e-8,
                        "{kind:?} l={l} le={le}: {by_quadrature} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn depolarizing_overlap_consistency_with_cost() {
        // overlap(depolarizing(l), identity) = 1 - c_f(l, 0).
        let quad = make_quadrature(32).unwrap();
        let l = 0.3;
        let c = ChannelModel::depolarizing(l).unwrap();
        let id = ChannelModel::depolarizing(0.0).unwrap();
        let overlap = channel_overlap(&c, &id, &quad).unwrap();
        let cost = cost_fidelity(&c, &id, &quad).unwrap();
        assert_abs_diff_eq!(overlap, 1.0 - cost, epsilon = 1e-12);
        assert_abs_diff_eq!(
            overlap,
            overlap_one_param(ChannelKind::Depolarizing, l, 0.0).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn raw_negative_pauli_estimates_evaluate() {
        let quad = make_quadrature(16).unwrap();
        let c_true = ChannelModel::pauli([0.1, 0.0, 0.2]).unwrap();
        let evaluator = FidelityCost::new(&c_true, &quad, SanitizeMode::Clamp).unwrap();
        let cost = evaluator.cost_of_raw(&[-0.25, 0.5, 0.25]).unwrap();
        assert!((0.0..=1.0).contains(&cost));
    }

    #[test]
    fn projection_sanitization_stays_in_range() {
        let projected = project_to_subsimplex(&[-0.25, 0.5, 0.25]);
        assert!(projected.iter().all(|&x| x >= 0.0));
        assert!(projected.iter().sum::<f64>() <= 1.0 + 1e-12);
        // Already-feasible points are only clipped at zero.
        let projected = project_to_subsimplex(&[0.1, 0.2, 0.3]);
        assert_abs_diff_eq!(projected[0], 0.1);
        assert_abs_diff_eq!(projected[1], 0.2);
        assert_abs_diff_eq!(projected[2], 0.3);
        // Infeasible sums land on the simplex boundary.
        let projected = project_to_subsimplex(&[0.9, 0.8, 0.7]);
        assert_abs_diff_eq!(projected.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn csv_row_format() {
        let report = MeanErrorReport {
            channel: "depolarizing".into(),
            lambda: vec![0.5],
            n: 10,
            cost: CostKind::Statistical,
            method: Method::ClosedForm,
            value: 0.025,
            std_error: 0.0,
            resolution: None,
            sanitize: None,
        };
        assert_eq!(
            MeanErrorReport::csv_header(1),
            "channel,cost,method,n,lambda,value,std_error"
        );
        let row = report.to_csv_row();
        assert!(row.starts_with("depolarizing,statistical,closed,10,"));
        assert_eq!(row.split(',').count(), 7);
    }
}
