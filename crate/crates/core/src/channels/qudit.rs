//! Shift/clock operators on D-level systems and the generalized Pauli
//! channel action.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

use super::ChannelModel;

type C64 = Complex64;

/// One error operator `U_{alpha,beta} = X^beta Z^alpha` together with its
/// indices.
#[derive(Debug, Clone)]
pub struct QuditOperator {
    pub alpha: usize,
    pub beta: usize,
    matrix: DMatrix<C64>,
}

impl QuditOperator {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// The clock operator `Z_D`, the shift operator `X_D`, and all `D^2`
/// products `U_{alpha,beta}` in row-major `(alpha, beta)` order.
#[derive(Debug, Clone)]
pub struct QuditOps {
    pub dim: usize,
    x: DMatrix<C64>,
    z: DMatrix<C64>,
    u: Vec<QuditOperator>,
}

impl QuditOps {
    pub fn x(&self) -> &DMatrix<C64> {
        &self.x
    }

    pub fn z(&self) -> &DMatrix<C64> {
        &self.z
    }

    pub fn get(&self, alpha: usize, beta: usize) -> &QuditOperator {
        &self.u[alpha * self.dim + beta]
    }

    pub fn all(&self) -> &[QuditOperator] {
        &self.u
    }
}

/// Builds the Weyl-Heisenberg operators for a D-level system:
/// `Z|j> = exp(i 2 pi j / D) |j>`, `X|j> = |(j - 1) mod D>`,
/// `U_{alpha,beta} = X^beta Z^alpha`.
pub fn qudit_ops(dim: usize) -> Result<QuditOps> {
    if dim < 2 {
        return Err(Error::InvalidConfig(format!("dimension {dim} < 2")));
    }
    let mut z = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim {
        let angle = std::f64::consts::TAU * j as f64 / dim as f64;
        z[(j, j)] = C64::new(angle.cos(), angle.sin());
    }
    let mut x = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim {
        x[((j + dim - 1) % dim, j)] = C64::new(1.0, 0.0);
    }
    let mut u = Vec::with_capacity(dim * dim);
    let mut z_pow = DMatrix::<C64>::identity(dim, dim);
    for alpha in 0..dim {
        let mut m = z_pow.clone();
        for beta in 0..dim {
            u.push(QuditOperator {
                alpha,
                beta,
                matrix: m.clone(),
            });
            m = &x * m;
        }
        z_pow = &z * z_pow;
    }
    Ok(QuditOps { dim, x, z, u })
}

/// Which part of the input the channel acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// The channel acts on the whole D-dimensional input.
    Whole,
    /// The input is bipartite (`D^2 x D^2`) and the channel acts as
    /// `1 (x) U` on the second factor.
    Second,
}

/// Operator-sum action of a generalized Pauli channel,
/// `rho' = sum lambda_{alpha,beta} U rho U^dag`, optionally applied only to
/// the second subsystem of a bipartite state. Trace is preserved.
pub fn apply_generalized_pauli(
    channel: &ChannelModel,
    rho: &DMatrix<C64>,
    subsystem: Subsystem,
) -> Result<DMatrix<C64>> {
    let (dim, lambda) = match channel {
        ChannelModel::GeneralizedPauli { dim, lambda } => (*dim, lambda),
        other => {
            return Err(Error::FamilyMismatch {
                expected: "generalized-pauli".into(),
                got: other.kind().name().into(),
            })
        }
    };
    channel.validate()?;
    let expected = match subsystem {
        Subsystem::Whole => dim,
        Subsystem::Second => dim * dim,
    };
    if rho.nrows() != expected || rho.ncols() != expected {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, channel needs {expected}x{expected}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let ops = qudit_ops(dim)?;
    let mut out = DMatrix::<C64>::zeros(expected, expected);
    for op in ops.all() {
        let w = lambda[op.alpha][op.beta];
        if w == 0.0 {
            continue;
        }
        let full = match subsystem {
            Subsystem::Whole => op.matrix().clone(),
            Subsystem::Second => DMatrix::<C64>::identity(dim, dim).kronecker(op.matrix()),
        };
        out += (&full * rho * full.adjoint()) * C64::new(w, 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bloch_to_density, BlochVector};
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut impl Rng, dim: usize) -> DMatrix<C64> {
        // A A^dag normalized to unit trace.
        let a = DMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let m = &a * a.adjoint();
        let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
        m / C64::new(tr, 0.0)
    }

    #[test]
    fn rejects_dim_below_two() {
        assert!(qudit_ops(1).is_err());
        assert!(qudit_ops(0).is_err());
    }

    #[test]
    fn shift_moves_basis_states_down() {
        let ops = qudit_ops(3).unwrap();
        // X|0> = |2>.
        assert_abs_diff_eq!(ops.x()[(2, 0)].re, 1.0);
        assert_abs_diff_eq!(ops.x()[(0, 0)].re, 0.0);
        // X|1> = |0>.
        assert_abs_diff_eq!(ops.x()[(0, 1)].re, 1.0);
    }

    #[test]
    fn qubit_clock_is_sigma_z() {
        let ops = qudit_ops(2).unwrap();
        assert_abs_diff_eq!(ops.z()[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(ops.z()[(1, 1)].re, -1.0, epsilon = 1e-15);
        assert!(ops.z()[(1, 1)].im.abs() < 1e-15);
    }

    #[test]
    fn u_zero_zero_is_identity() {
        for dim in 2..=5 {
            let ops = qudit_ops(dim).unwrap();
            let id = DMatrix::<C64>::identity(dim, dim);
            assert!((ops.get(0, 0).matrix() - id).norm() < 1e-15);
        }
    }

    #[test]
    fn operators_are_unitary() {
        for dim in 2..=6 {
            let ops = qudit_ops(dim).unwrap();
            let id = DMatrix::<C64>::identity(dim, dim);
            for op in ops.all() {
                let prod = op.matrix().adjoint() * op.matrix();
                assert!(
                    (prod - &id).norm() < 1e-12,
                    "U_{{{},{}}} not unitary for D={dim}",
                    op.alpha,
                    op.beta
                );
            }
        }
    }

    #[test]
    fn operators_are_hilbert_schmidt_orthogonal() {
        for dim in 2..=6 {
            let ops = qudit_ops(dim).unwrap();
            for a in ops.all() {
                for b in ops.all() {
                    let tr: C64 = (a.matrix().adjoint() * b.matrix()).trace();
                    let expected = if (a.alpha, a.beta) == (b.alpha, b.beta) {
                        dim as f64
                    } else {
                        0.0
                    };
                    assert!(
                        (tr - C64::new(expected, 0.0)).norm() < 1e-12,
                        "Tr U^dag U' mismatch at D={dim}"
                    );
                }
            }
        }
    }

    #[test]
    fn u11_conjugation_matches_sigma_y() {
        let ops = qudit_ops(2).unwrap();
        let u11 = ops.get(1, 1).matrix();
        let sy = Matrix2::new(
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 2);
            let via_u = u11 * &rho * u11.adjoint();
            let rho2 = Matrix2::new(rho[(0, 0)], rho[(0, 1)], rho[(1, 0)], rho[(1, 1)]);
            let via_sy = sy * rho2 * sy.adjoint();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((via_u[(i, j)] - via_sy[(i, j)]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn identity_probability_leaves_state_unchanged() {
        let mut lambda = vec![vec![0.0; 3]; 3];
        lambda[0][0] = 1.0;
        let c = ChannelModel::generalized_pauli(3, lambda).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density(&mut rng, 3);
        let out = apply_generalized_pauli(&c, &rho, Subsystem::Whole).unwrap();
        assert!((out - rho).norm() < 1e-14);
    }

    #[test]
    fn qubit_case_matches_pauli_channel() {
        // lambda_{0,1} = p1 (X), lambda_{1,1} = p2 (Y), lambda_{1,0} = p3 (Z).
        let (p1, p2, p3) = (0.15, 0.25, 0.1);
        let mut lambda = vec![vec![0.0; 2]; 2];
        lambda[0][0] = 1.0 - p1 - p2 - p3;
        lambda[0][1] = p1;
        lambda[1][1] = p2;
        lambda[1][0] = p3;
        let qudit = ChannelModel::generalized_pauli(2, lambda).unwrap();
        let pauli = ChannelModel::pauli([p1, p2, p3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let rho = random_density(&mut rng, 2);
            let via_qudit = apply_generalized_pauli(&qudit, &rho, Subsystem::Whole).unwrap();
            let rho2 = Matrix2::new(rho[(0, 0)], rho[(0, 1)], rho[(1, 0)], rho[(1, 1)]);
            let via_pauli = pauli.apply_matrix(&rho2).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (via_qudit[(i, j)] - via_pauli[(i, j)]).norm() < 1e-12,
                        "entry ({i},{j}) differs"
                    );
                }
            }
        }
    }

    #[test]
    fn trace_preserved_for_random_simplex_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in [2usize, 3] {
            for _ in 0..10 {
                let mut raw: Vec<f64> = (0..dim * dim).map(|_| rng.random_range(0.0..1.0)).collect();
                let total: f64 = raw.iter().sum();
                raw.iter_mut().for_each(|x| *x /= total);
                let lambda: Vec<Vec<f64>> =
                    raw.chunks(dim).map(|chunk| chunk.to_vec()).collect();
                let c = ChannelModel::generalized_pauli(dim, lambda).unwrap();
                let rho = random_density(&mut rng, dim);
                let out = apply_generalized_pauli(&c, &rho, Subsystem::Whole).unwrap();
                let tr: f64 = (0..dim).map(|i| out[(i, i)].re).sum();
                assert!((tr - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn second_subsystem_action_dimensions() {
        let mut lambda = vec![vec![0.0; 2]; 2];
        lambda[0][0] = 0.5;
        lambda[0][1] = 0.5;
        let c = ChannelModel::generalized_pauli(2, lambda).unwrap();
        let rho4 = {
            // |psi-><psi-| in the 2-qubit computational basis.
            let s = 1.0 / 2.0_f64.sqrt();
            let v = nalgebra::DVector::from_vec(vec![
                C64::new(0.0, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
                C64::new(0.0, 0.0),
            ]);
            &v * v.adjoint()
        };
        let out = apply_generalized_pauli(&c, &rho4, Subsystem::Second).unwrap();
        assert_eq!(out.nrows(), 4);
        let tr: f64 = (0..4).map(|i| out[(i, i)].re).sum();
        assert!((tr - 1.0).abs() < 1e-12);
        // Wrong dimension is rejected.
        let rho2 = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(apply_generalized_pauli(&c, &rho2, Subsystem::Second).is_err());

        let s = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let rho_dyn = DMatrix::from_fn(2, 2, |i, j| s.matrix()[(i, j)]);
        assert!(apply_generalized_pauli(&c, &rho_dyn, Subsystem::Whole).is_ok());
    }
}
