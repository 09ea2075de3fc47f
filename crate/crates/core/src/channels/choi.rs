//! Choi-matrix construction and the complete-positivity check.
//!
//! The Choi matrix is built by applying the channel to one half of the
//! unnormalized maximally entangled state: `J = sum_{jk} C(E_jk) (x) E_jk`
//! with matrix units `E_jk`. A map is completely positive iff `J` is
//! positive semidefinite; for trace-preserving qubit maps `Tr J = 2`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

use super::qudit::qudit_ops;

type C64 = Complex64;

/// Hermitian Choi matrix of a channel (`4x4` for qubit maps, `D^2 x D^2`
/// for D-level maps).
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    matrix: DMatrix<C64>,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Builds the qubit Choi matrix from the channel's linear action on 2x2
/// matrices.
pub(super) fn choi_from_qubit_action<F>(mut action: F) -> Result<ChoiMatrix>
where
    F: FnMut(&Matrix2<C64>) -> Result<Matrix2<C64>>,
{
    let mut j = DMatrix::<C64>::zeros(4, 4);
    for row in 0..2 {
        for col in 0..2 {
            let mut unit = Matrix2::<C64>::zeros();
            unit[(row, col)] = C64::new(1.0, 0.0);
            let mapped = action(&unit)?;
            // kron(C(E_jk), E_jk) accumulated into J.
            for a in 0..2 {
                for b in 0..2 {
                    j[(2 * a + row, 2 * b + col)] += mapped[(a, b)];
                }
            }
        }
    }
    Ok(ChoiMatrix { matrix: j })
}

/// Choi matrix of a generalized Pauli channel on a D-level system,
/// `J = sum lambda_{alpha,beta} kron(U rho U^dag applied to units, units)`.
pub(super) fn choi_generalized_pauli(dim: usize, lambda: &[Vec<f64>]) -> Result<ChoiMatrix> {
    if dim < 2 {
        return Err(Error::InvalidConfig(format!("dimension {dim} < 2")));
    }
    let ops = qudit_ops(dim)?;
    let d2 = dim * dim;
    let mut j = DMatrix::<C64>::zeros(d2, d2);
    for row in 0..dim {
        for col in 0..dim {
            let mut unit = DMatrix::<C64>::zeros(dim, dim);
            unit[(row, col)] = C64::new(1.0, 0.0);
            let mut mapped = DMatrix::<C64>::zeros(dim, dim);
            for op in ops.all() {
                let w = lambda[op.alpha][op.beta];
                if w != 0.0 {
                    mapped += (op.matrix() * &unit * op.matrix().adjoint()) * C64::new(w, 0.0);
                }
            }
            for a in 0..dim {
                for b in 0..dim {
                    j[(dim * a + row, dim * b + col)] += mapped[(a, b)];
                }
            }
        }
    }
    Ok(ChoiMatrix { matrix: j })
}

/// `true` iff the smallest Choi eigenvalue is at least `-tol`.
pub fn is_completely_positive(choi: &ChoiMatrix, tol: f64) -> bool {
    choi.min_eigenvalue() >= -tol
}
