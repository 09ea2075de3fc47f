//! Parametrized channel models, their action on qubit states, and
//! complete-positivity validation.

mod choi;
mod qudit;

pub use choi::{is_completely_positive, ChoiMatrix};
pub use qudit::{apply_generalized_pauli, qudit_ops, QuditOperator, QuditOps, Subsystem};

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qstate::{BlochVector, DensityMatrix2};
use crate::{Error, Result, Tolerances};

type C64 = Complex64;

/// Kind tag for a [`ChannelModel`], used for family checks and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    Depolarizing,
    PhaseDamping,
    AmplitudeDamping,
    Pauli,
    GeneralAffine,
    GeneralizedPauli,
}

impl ChannelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::PhaseDamping => "phase-damping",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::Pauli => "pauli",
            ChannelKind::GeneralAffine => "general-affine",
            ChannelKind::GeneralizedPauli => "generalized-pauli",
        }
    }
}

/// A parametrized quantum channel from one of the modeled families.
///
/// Parameter ranges are checked by [`ChannelModel::validate`] (and by the
/// convenience constructors). Complete positivity is a separate, explicit
/// check via [`is_completely_positive`]: the 12-parameter affine family is
/// range-checked only, and not every in-range affine parameter vector is a
/// CP map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelModel {
    /// Isotropic contraction `s' = (1 - 2 lambda) s`, `lambda` in `[0, 1/2]`.
    Depolarizing { lambda: f64 },
    /// Equatorial contraction `s' = ((1-2l) s1, (1-2l) s2, s3)`, `lambda` in `[0, 1/2]`.
    PhaseDamping { lambda: f64 },
    /// Decay towards `|down_z>`:
    /// `s' = (sqrt(1-l) s1, sqrt(1-l) s2, (1-l) s3 + l)`, `lambda` in `[0, 1]`.
    AmplitudeDamping { lambda: f64 },
    /// Random Pauli errors with probabilities `(l1, l2, l3)`, each >= 0,
    /// summing to at most 1.
    Pauli { lambda: [f64; 3] },
    /// Twelve-parameter affine channel; see [`params_to_affine`] for the
    /// matrix layout. Each parameter lies in `[0, 1]`.
    GeneralAffine { lambda: [f64; 12] },
    /// Generalized Pauli channel on a D-level system: error `U_{alpha,beta}`
    /// occurs with probability `lambda[alpha][beta]`; probabilities sum to 1.
    GeneralizedPauli { dim: usize, lambda: Vec<Vec<f64>> },
}

impl ChannelModel {
    pub fn depolarizing(lambda: f64) -> Result<Self> {
        let c = ChannelModel::Depolarizing { lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn phase_damping(lambda: f64) -> Result<Self> {
        let c = ChannelModel::PhaseDamping { lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn amplitude_damping(lambda: f64) -> Result<Self> {
        let c = ChannelModel::AmplitudeDamping { lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn pauli(lambda: [f64; 3]) -> Result<Self> {
        let c = ChannelModel::Pauli { lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn general_affine(lambda: [f64; 12]) -> Result<Self> {
        let c = ChannelModel::GeneralAffine { lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn generalized_pauli(dim: usize, lambda: Vec<Vec<f64>>) -> Result<Self> {
        let c = ChannelModel::GeneralizedPauli { dim, lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn kind(&self) -> ChannelKind {
        match self {
            ChannelModel::Depolarizing { .. } => ChannelKind::Depolarizing,
            ChannelModel::PhaseDamping { .. } => ChannelKind::PhaseDamping,
            ChannelModel::AmplitudeDamping { .. } => ChannelKind::AmplitudeDamping,
            ChannelModel::Pauli { .. } => ChannelKind::Pauli,
            ChannelModel::GeneralAffine { .. } => ChannelKind::GeneralAffine,
            ChannelModel::GeneralizedPauli { .. } => ChannelKind::GeneralizedPauli,
        }
    }

    /// The free parameter vector of the family.
    ///
    /// For the generalized Pauli channel this is the row-major list of the
    /// `D^2 - 1` error probabilities, skipping the identity entry
    /// `(alpha, beta) = (0, 0)` whose value is fixed by normalization.
    pub fn free_params(&self) -> Vec<f64> {
        match self {
            ChannelModel::Depolarizing { lambda }
            | ChannelModel::PhaseDamping { lambda }
            | ChannelModel::AmplitudeDamping { lambda } => vec![*lambda],
            ChannelModel::Pauli { lambda } => lambda.to_vec(),
            ChannelModel::GeneralAffine { lambda } => lambda.to_vec(),
            ChannelModel::GeneralizedPauli { dim, lambda } => {
                let mut out = Vec::with_capacity(dim * dim - 1);
                for (a, row) in lambda.iter().enumerate() {
                    for (b, &l) in row.iter().enumerate() {
                        if a != 0 || b != 0 {
                            out.push(l);
                        }
                    }
                }
                out
            }
        }
    }

    /// Range checks for the family parameters.
    pub fn validate(&self) -> Result<()> {
        let check_range = |l: f64, max: f64, what: &str| -> Result<()> {
            if !(0.0..=max).contains(&l) {
                return Err(Error::InvalidConfig(format!(
                    "{what} parameter {l} outside [0, {max}]"
                )));
            }
            Ok(())
        };
        match self {
            ChannelModel::Depolarizing { lambda } => check_range(*lambda, 0.5, "depolarizing"),
            ChannelModel::PhaseDamping { lambda } => check_range(*lambda, 0.5, "phase-damping"),
            ChannelModel::AmplitudeDamping { lambda } => {
                check_range(*lambda, 1.0, "amplitude-damping")
            }
            ChannelModel::Pauli { lambda } => {
                for &l in lambda {
                    check_range(l, 1.0, "pauli")?;
                }
                let sum: f64 = lambda.iter().sum();
                if sum > 1.0 + 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "pauli probabilities sum to {sum} > 1"
                    )));
                }
                Ok(())
            }
            ChannelModel::GeneralAffine { lambda } => {
                for &l in lambda {
                    check_range(l, 1.0, "general-affine")?;
                }
                Ok(())
            }
            ChannelModel::GeneralizedPauli { dim, lambda } => {
                if *dim < 2 {
                    return Err(Error::InvalidConfig(format!("dimension {dim} < 2")));
                }
                if lambda.len() != *dim || lambda.iter().any(|row| row.len() != *dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "probability array is not {dim}x{dim}"
                    )));
                }
                let mut sum = 0.0;
                for row in lambda {
                    for &l in row {
                        if l < 0.0 {
                            return Err(Error::InvalidConfig(format!(
                                "negative probability {l}"
                            )));
                        }
                        sum += l;
                    }
                }
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "probabilities sum to {sum}, expected 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Bloch-vector action of the channel. Only defined for qubit channels
    /// (the generalized Pauli family is accepted for `dim = 2`, where it
    /// coincides with the Pauli family).
    pub fn apply(&self, s: &BlochVector) -> Result<BlochVector> {
        s.validate(Tolerances::default().state)?;
        match self {
            ChannelModel::GeneralizedPauli { dim, .. } if *dim != 2 => {
                Err(Error::InvalidConfig(format!(
                    "Bloch action is only defined for qubit channels (dim = {dim})"
                )))
            }
            _ => Ok(bloch_action(self.kind(), &self.qubit_raw_params(), s)),
        }
    }

    /// Density-matrix action of the channel (qubit families; the generalized
    /// Pauli family with `dim = 2`).
    pub fn apply_density(&self, rho: &DensityMatrix2) -> Result<DensityMatrix2> {
        let out = self.apply_matrix(rho.matrix())?;
        DensityMatrix2::new(out, Tolerances::default().state)
    }

    /// Linear extension of the channel to arbitrary 2x2 matrices; the basis
    /// of the operator-sum picture and of the Choi construction.
    pub(crate) fn apply_matrix(&self, a: &Matrix2<C64>) -> Result<Matrix2<C64>> {
        let tr = a[(0, 0)] + a[(1, 1)];
        Ok(match self {
            // (1 - 2l) A + l Tr(A) 1: reduces to (1-l) rho + l (1 - rho)
            // on states, i.e. the orthogonal-state mixture.
            ChannelModel::Depolarizing { lambda } => {
                let mut out = a * C64::new(1.0 - 2.0 * lambda, 0.0);
                out[(0, 0)] += tr * C64::new(*lambda, 0.0);
                out[(1, 1)] += tr * C64::new(*lambda, 0.0);
                out
            }
            ChannelModel::PhaseDamping { lambda } => {
                let f = C64::new(1.0 - 2.0 * lambda, 0.0);
                Matrix2::new(a[(0, 0)], a[(0, 1)] * f, a[(1, 0)] * f, a[(1, 1)])
            }
            // Kraus pair in the (down, up) ordering: decay up -> down.
            ChannelModel::AmplitudeDamping { lambda } => {
                let root = C64::new((1.0 - lambda).sqrt(), 0.0);
                Matrix2::new(
                    a[(0, 0)] + a[(1, 1)] * C64::new(*lambda, 0.0),
                    a[(0, 1)] * root,
                    a[(1, 0)] * root,
                    a[(1, 1)] * C64::new(1.0 - lambda, 0.0),
                )
            }
            ChannelModel::Pauli { lambda } => {
                let id = 1.0 - lambda[0] - lambda[1] - lambda[2];
                let mut out = a * C64::new(id, 0.0);
                out += pauli_x_conj(a) * C64::new(lambda[0], 0.0);
                out += pauli_y_conj(a) * C64::new(lambda[1], 0.0);
                out += pauli_z_conj(a) * C64::new(lambda[2], 0.0);
                out
            }
            ChannelModel::GeneralAffine { lambda } => {
                let map = params_to_affine(lambda)?;
                return map.apply_matrix(a);
            }
            ChannelModel::GeneralizedPauli { dim, lambda } => {
                if *dim != 2 {
                    return Err(Error::InvalidConfig(format!(
                        "2x2 action is only defined for dim = 2 (got {dim})"
                    )));
                }
                // U_{0,1} = X, U_{1,1} = XZ ~ Y, U_{1,0} = Z.
                let eq = ChannelModel::Pauli {
                    lambda: [lambda[0][1], lambda[1][1], lambda[1][0]],
                };
                return eq.apply_matrix(a);
            }
        })
    }

    /// Choi matrix of the channel: the channel applied to one half of the
    /// unnormalized maximally entangled state (trace `D` for
    /// trace-preserving maps).
    pub fn to_choi(&self) -> Result<ChoiMatrix> {
        match self {
            ChannelModel::GeneralizedPauli { dim, lambda } if *dim != 2 => {
                choi::choi_generalized_pauli(*dim, lambda)
            }
            _ => choi::choi_from_qubit_action(|a| self.apply_matrix(a)),
        }
    }

    /// Raw parameter vector in the layout expected by [`bloch_action`].
    fn qubit_raw_params(&self) -> Vec<f64> {
        match self {
            ChannelModel::GeneralizedPauli { dim, lambda } if *dim == 2 => {
                vec![lambda[0][1], lambda[1][1], lambda[1][0]]
            }
            _ => self.free_params(),
        }
    }
}

/// Bloch action for a channel family with raw, range-unchecked parameters.
///
/// Estimation can produce parameter vectors outside the family range
/// (negative Pauli probabilities, one-parameter estimates above 1/2); the
/// fidelity cost still has to evaluate the corresponding map. For the
/// `GeneralizedPauli` kind the parameters are the qubit triple
/// `(l_x, l_y, l_z)`.
pub fn bloch_action(kind: ChannelKind, params: &[f64], s: &BlochVector) -> BlochVector {
    match kind {
        ChannelKind::Depolarizing => {
            let f = 1.0 - 2.0 * params[0];
            BlochVector::new(f * s.s1, f * s.s2, f * s.s3)
        }
        ChannelKind::PhaseDamping => {
            let f = 1.0 - 2.0 * params[0];
            BlochVector::new(f * s.s1, f * s.s2, s.s3)
        }
        ChannelKind::AmplitudeDamping => {
            let l = params[0];
            // Clamp the transverse factor's radicand for raw l > 1.
            let root = (1.0 - l).max(0.0).sqrt();
            BlochVector::new(root * s.s1, root * s.s2, (1.0 - l) * s.s3 + l)
        }
        ChannelKind::Pauli | ChannelKind::GeneralizedPauli => {
            let (l1, l2, l3) = (params[0], params[1], params[2]);
            BlochVector::new(
                (1.0 - 2.0 * l2 - 2.0 * l3) * s.s1,
                (1.0 - 2.0 * l1 - 2.0 * l3) * s.s2,
                (1.0 - 2.0 * l1 - 2.0 * l2) * s.s3,
            )
        }
        ChannelKind::GeneralAffine => affine_from_raw(params).apply_unchecked(s),
    }
}

/// Bloch action on a unit input together with the radicand `1 - |s'|^2`
/// evaluated by exact per-family algebra and clamped at zero.
///
/// Forming `1 - |s'|^2` numerically cancels catastrophically when the
/// output is pure (the square root then amplifies rounding noise to 1e-8);
/// the family formulas below are exactly zero there instead, which the
/// fidelity quadrature needs to hit its tolerances. Parameters follow the
/// [`bloch_action`] layout and may be raw.
pub fn unit_action_with_radicand(
    kind: ChannelKind,
    params: &[f64],
    n: &BlochVector,
) -> (BlochVector, f64) {
    let out = bloch_action(kind, params, n);
    let radicand = match kind {
        // 1 - f^2 with f = 1 - 2 lambda.
        ChannelKind::Depolarizing => {
            let f = 1.0 - 2.0 * params[0];
            (1.0 - f) * (1.0 + f)
        }
        // (n1^2 + n2^2)(1 - f^2).
        ChannelKind::PhaseDamping => {
            let f = 1.0 - 2.0 * params[0];
            (n.s1 * n.s1 + n.s2 * n.s2) * (1.0 - f) * (1.0 + f)
        }
        // lambda (1 - lambda) (1 - n3)^2.
        ChannelKind::AmplitudeDamping => {
            let l = params[0];
            (l * (1.0 - l)).max(0.0) * (1.0 - n.s3) * (1.0 - n.s3)
        }
        // sum_k n_k^2 (1 - a_k^2) with 1 - a_k^2 = 4 b (1 - b),
        // b the summed pair probability entering axis k.
        ChannelKind::Pauli | ChannelKind::GeneralizedPauli => {
            let (l1, l2, l3) = (params[0], params[1], params[2]);
            let t = |b: f64| 4.0 * b * (1.0 - b);
            t(l2 + l3) * n.s1 * n.s1 + t(l1 + l3) * n.s2 * n.s2 + t(l1 + l2) * n.s3 * n.s3
        }
        ChannelKind::GeneralAffine => 1.0 - out.norm_squared(),
    };
    (out, radicand.max(0.0))
}

// sigma_k A sigma_k in the (down, up) basis ordering.
fn pauli_x_conj(a: &Matrix2<C64>) -> Matrix2<C64> {
    Matrix2::new(a[(1, 1)], a[(1, 0)], a[(0, 1)], a[(0, 0)])
}

fn pauli_y_conj(a: &Matrix2<C64>) -> Matrix2<C64> {
    Matrix2::new(a[(1, 1)], -a[(1, 0)], -a[(0, 1)], a[(0, 0)])
}

fn pauli_z_conj(a: &Matrix2<C64>) -> Matrix2<C64> {
    Matrix2::new(a[(0, 0)], -a[(0, 1)], -a[(1, 0)], a[(1, 1)])
}

/// Affine Bloch-space map `s' = M s + v`.
///
/// `M` is not required to be invertible: degenerate parameter choices such
/// as total depolarization produce `M = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub m: Matrix3<f64>,
    pub v: Vector3<f64>,
}

impl AffineMap {
    pub fn new(m: Matrix3<f64>, v: Vector3<f64>) -> Self {
        Self { m, v }
    }

    pub fn identity() -> Self {
        Self::new(Matrix3::identity(), Vector3::zeros())
    }

    /// Diagonal map `s' = (d1 s1, d2 s2, d3 s3)` (no shift).
    pub fn from_diagonal(d1: f64, d2: f64, d3: f64) -> Self {
        Self::new(
            Matrix3::from_diagonal(&Vector3::new(d1, d2, d3)),
            Vector3::zeros(),
        )
    }

    pub fn apply(&self, s: &BlochVector) -> Result<BlochVector> {
        s.validate(Tolerances::default().state)?;
        Ok(self.apply_unchecked(s))
    }

    fn apply_unchecked(&self, s: &BlochVector) -> BlochVector {
        let sv = Vector3::new(s.s1, s.s2, s.s3);
        let out = self.m * sv + self.v;
        BlochVector::new(out[0], out[1], out[2])
    }

    /// Linear extension to arbitrary 2x2 matrices via the Pauli
    /// decomposition `A = a0 1 + a . sigma`: `C(A) = a0 (1 + v . sigma)
    /// + (M a) . sigma`.
    pub(crate) fn apply_matrix(&self, a: &Matrix2<C64>) -> Result<Matrix2<C64>> {
        let a0 = (a[(0, 0)] + a[(1, 1)]) * C64::new(0.5, 0.0);
        // a_k = Tr(A sigma_k) / 2 (complex for non-Hermitian A).
        let ax = (a[(0, 1)] + a[(1, 0)]) * C64::new(0.5, 0.0);
        let ay = (a[(0, 1)] - a[(1, 0)]) * C64::new(0.0, 0.5);
        let az = (a[(0, 0)] - a[(1, 1)]) * C64::new(0.5, 0.0);
        let av = Vector3::new(ax, ay, az);

        let mc = self.m.map(|x| C64::new(x, 0.0));
        let vc = self.v.map(|x| C64::new(x, 0.0));
        let out_v = mc * av + vc * a0;
        let (bx, by, bz) = (out_v[0], out_v[1], out_v[2]);
        Ok(Matrix2::new(
            a0 + bz,
            bx - by * C64::i(),
            bx + by * C64::i(),
            a0 - bz,
        ))
    }

    pub fn to_choi(&self) -> Result<ChoiMatrix> {
        choi::choi_from_qubit_action(|a| self.apply_matrix(a))
    }
}

/// Builds the affine map of the 12-parameter channel:
///
/// ```text
///     | 2 l7 - l1 - l4   2 l10 - l1 - l4   l4 - l1 |        | l1 + l4 - 1 |
/// M = | 2 l8 - l2 - l5   2 l11 - l2 - l5   l5 - l2 |,   v = | l2 + l5 - 1 |
///     | 2 l9 - l3 - l6   2 l12 - l3 - l6   l6 - l3 |        | l3 + l6 - 1 |
/// ```
///
/// Each parameter must lie in `[0, 1]`.
pub fn params_to_affine(lambda: &[f64; 12]) -> Result<AffineMap> {
    for (j, &l) in lambda.iter().enumerate() {
        if !(0.0..=1.0).contains(&l) {
            return Err(Error::InvalidConfig(format!(
                "affine parameter {} = {l} outside [0, 1]",
                j + 1
            )));
        }
    }
    Ok(affine_from_raw(lambda))
}

fn affine_from_raw(l: &[f64]) -> AffineMap {
    let (l1, l2, l3) = (l[0], l[1], l[2]);
    let (l4, l5, l6) = (l[3], l[4], l[5]);
    let (l7, l8, l9) = (l[6], l[7], l[8]);
    let (l10, l11, l12) = (l[9], l[10], l[11]);
    let m = Matrix3::new(
        2.0 * l7 - l1 - l4,
        2.0 * l10 - l1 - l4,
        l4 - l1,
        2.0 * l8 - l2 - l5,
        2.0 * l11 - l2 - l5,
        l5 - l2,
        2.0 * l9 - l3 - l6,
        2.0 * l12 - l3 - l6,
        l6 - l3,
    );
    let v = Vector3::new(l1 + l4 - 1.0, l2 + l5 - 1.0, l3 + l6 - 1.0);
    AffineMap::new(m, v)
}

/// Parameter vector of the 12-parameter family that realizes the identity
/// channel (`M = 1`, `v = 0`).
pub fn identity_affine_params() -> [f64; 12] {
    [0.5, 0.5, 0.0, 0.5, 0.5, 1.0, 1.0, 0.5, 0.5, 0.5, 1.0, 0.5]
}

/// Parameter vector of the 12-parameter family that realizes total
/// depolarization (`M = 0`, `v = 0`).
pub fn total_depolarization_affine_params() -> [f64; 12] {
    [0.5; 12]
}
