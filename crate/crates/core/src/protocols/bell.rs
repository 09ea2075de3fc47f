//! Generalized Bell bases and probe-state admissibility for
//! entanglement-based estimation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channels::QuditOperator;
use crate::{Error, Result};

type C64 = Complex64;

/// The `D^2` maximally entangled basis states
/// `|psi_{alpha,beta}> = (1 (x) U_{alpha,beta}) |psi_{0,0}>`
/// with `|psi_{0,0}> = (1/sqrt(D)) sum_i |i>|i>`, listed row-major in
/// `(alpha, beta)`.
///
/// Component layout: the basis state `|j>|k>` sits at index `j * D + k`.
pub fn bell_basis(dim: usize) -> Result<Vec<DVector<C64>>> {
    if dim < 2 {
        return Err(Error::InvalidConfig(format!("dimension {dim} < 2")));
    }
    let norm = 1.0 / (dim as f64).sqrt();
    let mut basis = Vec::with_capacity(dim * dim);
    for alpha in 0..dim {
        for beta in 0..dim {
            let mut v = DVector::<C64>::zeros(dim * dim);
            for k in 0..dim {
                let angle = std::f64::consts::TAU * (alpha * k) as f64 / dim as f64;
                let second = (k + dim - beta) % dim;
                v[k * dim + second] = C64::new(angle.cos(), angle.sin()) * norm;
            }
            basis.push(v);
        }
    }
    Ok(basis)
}

/// Result of the probe-admissibility check: whether the error operators map
/// the probe onto mutually orthonormal states, and whether the necessary
/// dimension bound `n <= D'` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub orthonormal: bool,
    pub bound_satisfied: bool,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.orthonormal
    }
}

/// Checks `<psi| (1 (x) A_i)^dag (1 (x) A_j) |psi> = delta_ij` within `tol`
/// for all operator pairs, and reports the necessary bound `n <= D'` where
/// `n` is the number of error operators and `D'` the probe-space dimension.
///
/// The probe may live on a single system (`dim(probe) = dim(A)`) or carry an
/// untouched ancilla factor (`dim(probe) = k * dim(A)`, operators act as
/// `1_k (x) A`).
pub fn check_probe_admissibility(
    error_ops: &[QuditOperator],
    probe: &DVector<C64>,
    tol: f64,
) -> Result<AdmissibilityReport> {
    if error_ops.is_empty() {
        return Err(Error::InvalidConfig("no error operators given".into()));
    }
    let op_dim = error_ops[0].dim();
    if error_ops.iter().any(|op| op.dim() != op_dim) {
        return Err(Error::DimensionMismatch(
            "error operators have mixed dimensions".into(),
        ));
    }
    let total = probe.len();
    if total % op_dim != 0 {
        return Err(Error::DimensionMismatch(format!(
            "probe dimension {total} is not a multiple of operator dimension {op_dim}"
        )));
    }
    let ancilla = total / op_dim;

    let mapped: Vec<DVector<C64>> = error_ops
        .iter()
        .map(|op| apply_on_second(op.matrix(), probe, ancilla, op_dim))
        .collect();
    let mut orthonormal = true;
    'outer: for (i, vi) in mapped.iter().enumerate() {
        for (j, vj) in mapped.iter().enumerate() {
            let inner: C64 = vi.dotc(vj);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (inner - C64::new(expected, 0.0)).norm() > tol {
                orthonormal = false;
                break 'outer;
            }
        }
    }
    Ok(AdmissibilityReport {
        orthonormal,
        bound_satisfied: error_ops.len() <= total,
    })
}

/// `(1_k (x) A) |psi>` without materializing the Kronecker product.
fn apply_on_second(
    a: &DMatrix<C64>,
    psi: &DVector<C64>,
    ancilla: usize,
    dim: usize,
) -> DVector<C64> {
    let mut out = DVector::<C64>::zeros(psi.len());
    for block in 0..ancilla {
        let base = block * dim;
        for row in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..dim {
                acc += a[(row, col)] * psi[base + col];
            }
            out[base + row] = acc;
        }
    }
    out
}
