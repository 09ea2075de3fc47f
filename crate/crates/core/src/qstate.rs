//! Qubit states, fidelity, and deterministic quadrature over the Bloch sphere.
//!
//! A qubit state is written as `rho = (1 + s . sigma) / 2` with a real Bloch
//! vector `s`, `|s| <= 1`. The matrix basis is ordered `|down_z>` first,
//! `|up_z>` second, and the Pauli matrices are the standard ones in that
//! ordering, so `s3 = rho_dd - rho_uu` and `|down_z>` sits at the north pole
//! `s = (0, 0, +1)`. This sign convention makes the amplitude-damping fixed
//! point (decay towards `|down_z>`) come out at `s = (0, 0, +1)` and is used
//! consistently everywhere in the crate.

use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Tolerances};

type C64 = Complex64;

/// Real 3-vector representing a qubit state; physical states have `|s| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl BlochVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    pub fn norm_squared(&self) -> f64 {
        self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.s1 * other.s1 + self.s2 * other.s2 + self.s3 * other.s3
    }

    /// Checks `|s|^2 <= 1 + tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n2 = self.norm_squared();
        if n2 > 1.0 + tol {
            return Err(Error::InvalidState(format!(
                "Bloch vector norm {} exceeds 1",
                n2.sqrt()
            )));
        }
        Ok(())
    }
}

/// 2x2 density matrix in the `(|down_z>, |up_z>)` basis ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix2 {
    matrix: Matrix2<C64>,
}

impl DensityMatrix2 {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity
    /// within `tol`.
    pub fn new(matrix: Matrix2<C64>, tol: f64) -> Result<Self> {
        let herm = (matrix[(0, 1)] - matrix[(1, 0)].conj()).norm()
            + matrix[(0, 0)].im.abs()
            + matrix[(1, 1)].im.abs();
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let trace = matrix[(0, 0)].re + matrix[(1, 1)].re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace is {trace}, expected 1"
            )));
        }
        // Eigenvalues of a 2x2 Hermitian matrix in closed form.
        let half_t = trace / 2.0;
        let det = (matrix[(0, 0)] * matrix[(1, 1)] - matrix[(0, 1)] * matrix[(1, 0)]).re;
        let disc = (half_t * half_t - det).max(0.0).sqrt();
        if half_t - disc < -tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                half_t - disc
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.matrix
    }

    /// Both eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_t = (self.matrix[(0, 0)].re + self.matrix[(1, 1)].re) / 2.0;
        let det =
            (self.matrix[(0, 0)] * self.matrix[(1, 1)] - self.matrix[(0, 1)] * self.matrix[(1, 0)]).re;
        let disc = (half_t * half_t - det).max(0.0).sqrt();
        (half_t - disc, half_t + disc)
    }
}

/// Direction on the unit sphere, `theta` in `[0, pi]`, `phi` in `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereDirection {
    pub theta: f64,
    pub phi: f64,
}

impl SphereDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidConfig(format!("theta {theta} outside [0, pi]")));
        }
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(Error::InvalidConfig(format!("phi {phi} outside [0, 2pi)")));
        }
        Ok(Self { theta, phi })
    }

    /// Unit Bloch vector `(cos(phi) sin(theta), sin(phi) sin(theta), cos(theta))`.
    pub fn unit_bloch(&self) -> BlochVector {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        BlochVector::new(cp * st, sp * st, ct)
    }
}

/// Deterministic quadrature rule for averages over pure states,
/// `<f> = integral f(n) dOmega / (4 pi)`.
///
/// Product rule: Gauss-Legendre nodes in `cos(theta)` times a uniform
/// midpoint rule in `phi` with twice as many nodes. Weights are normalized
/// to sum to 1.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    nodes: Vec<(SphereDirection, f64)>,
    points: Vec<(BlochVector, f64)>,
    resolution: u32,
}

impl SphereQuadrature {
    pub fn nodes(&self) -> &[(SphereDirection, f64)] {
        &self.nodes
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Quadrature points as precomputed unit Bloch vectors with weights.
    pub fn points(&self) -> &[(BlochVector, f64)] {
        &self.points
    }

    /// Weighted sum of `f` over the quadrature points (fixed order).
    pub fn integrate<F: Fn(&BlochVector) -> f64>(&self, f: F) -> f64 {
        self.points.iter().map(|(n, w)| w * f(n)).sum()
    }
}

/// Builds the sphere quadrature with `resolution` polar nodes and
/// `2 * resolution` azimuthal nodes.
pub fn make_quadrature(resolution: u32) -> Result<SphereQuadrature> {
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "quadrature resolution {resolution} < 2"
        )));
    }
    let polar = gauss_legendre(resolution as usize);
    let n_phi = 2 * resolution as usize;
    let phi_w = 1.0 / n_phi as f64;
    let mut nodes = Vec::with_capacity(resolution as usize * n_phi);
    let mut points = Vec::with_capacity(nodes.capacity());
    for &(x, w) in &polar {
        // x = cos(theta); Gauss-Legendre weights over [-1, 1] sum to 2.
        let theta = x.clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * (j as f64 + 0.5) / n_phi as f64;
            let dir = SphereDirection { theta, phi };
            let weight = 0.5 * w * phi_w;
            points.push((dir.unit_bloch(), weight));
            nodes.push((dir, weight));
        }
    }
    Ok(SphereQuadrature {
        nodes,
        points,
        resolution,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    // Ascending in x = cos(theta) for a deterministic node order.
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

/// `rho = (1 + s . sigma) / 2`.
pub fn bloch_to_density(s: &BlochVector) -> Result<DensityMatrix2> {
    let tol = Tolerances::default().state;
    s.validate(tol)?;
    Ok(DensityMatrix2 {
        matrix: density_from_bloch_unchecked(s),
    })
}

pub(crate) fn density_from_bloch_unchecked(s: &BlochVector) -> Matrix2<C64> {
    let half = 0.5;
    Matrix2::new(
        C64::new(half * (1.0 + s.s3), 0.0),
        C64::new(half * s.s1, -half * s.s2),
        C64::new(half * s.s1, half * s.s2),
        C64::new(half * (1.0 - s.s3), 0.0),
    )
}

/// `s = Tr(rho sigma)`; exact inverse of [`bloch_to_density`].
pub fn density_to_bloch(rho: &DensityMatrix2) -> BlochVector {
    bloch_from_matrix(rho.matrix())
}

pub(crate) fn bloch_from_matrix(m: &Matrix2<C64>) -> BlochVector {
    BlochVector::new(
        2.0 * m[(0, 1)].re,
        -2.0 * m[(0, 1)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    )
}

/// State fidelity in Bloch form,
/// `F = [1 + s1.s2 + sqrt((1 - |s1|^2)(1 - |s2|^2))] / 2`.
///
/// Each radicand is clamped at zero so that slightly super-unit vectors
/// (rounding, or unphysical estimates) still evaluate; the result is clamped
/// to `[0, 1]`.
pub fn fidelity_bloch(s1: &BlochVector, s2: &BlochVector) -> Result<f64> {
    let tol = Tolerances::default().state;
    s1.validate(tol)?;
    s2.validate(tol)?;
    Ok(fidelity_bloch_clamped(s1, s2))
}

/// The fidelity formula with per-radicand clamping, without the norm
/// precondition. Used by the cost functions, where estimated channels may
/// be applied with raw (unphysical) parameters.
pub fn fidelity_bloch_clamped(s1: &BlochVector, s2: &BlochVector) -> f64 {
    let r1 = (1.0 - s1.norm_squared()).max(0.0);
    let r2 = (1.0 - s2.norm_squared()).max(0.0);
    let f = 0.5 * (1.0 + s1.dot(s2) + (r1 * r2).sqrt());
    f.clamp(0.0, 1.0)
}

/// Mixed-state fidelity `Tr^2 sqrt(sqrt(rho1) rho2 sqrt(rho1))` computed by
/// explicit 2x2 eigendecompositions. Serves as the matrix-level oracle for
/// [`fidelity_bloch`].
pub fn fidelity_density(rho1: &DensityMatrix2, rho2: &DensityMatrix2) -> f64 {
    let sqrt1 = matrix_sqrt_psd(rho1.matrix());
    let inner = sqrt1 * rho2.matrix() * sqrt1;
    let eig = SymmetricEigen::new(inner);
    let tr: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    (tr * tr).clamp(0.0, 1.0)
}

/// Principal square root of a positive semidefinite Hermitian 2x2 matrix.
fn matrix_sqrt_psd(m: &Matrix2<C64>) -> Matrix2<C64> {
    let eig = SymmetricEigen::new(*m);
    let u = eig.eigenvectors;
    let mut d = Matrix2::zeros();
    for i in 0..2 {
        d[(i, i)] = C64::new(eig.eigenvalues[i].max(0.0).sqrt(), 0.0);
    }
    u * d * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut impl Rng) -> BlochVector {
        // Uniform direction, radius biased towards the surface.
        loop {
            let s = BlochVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if s.norm_squared() <= 1.0 {
                return s;
            }
        }
    }

    #[test]
    fn maximally_mixed_density() {
        let rho = bloch_to_density(&BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.5);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.5);
        assert_abs_diff_eq!(rho.matrix()[(0, 1)].norm(), 0.0);
    }

    #[test]
    fn north_pole_is_down_z() {
        // s3 = rho_dd - rho_uu: (0,0,1) is the |down_z> projector diag(1, 0).
        let rho = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.0);
        let back = density_to_bloch(&rho);
        assert_abs_diff_eq!(back.s3, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn up_x_has_all_entries_one_half() {
        let rho = bloch_to_density(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(rho.matrix()[(i, j)].re, 0.5);
                assert_abs_diff_eq!(rho.matrix()[(i, j)].im, 0.0);
            }
        }
        let back = density_to_bloch(&rho);
        assert_abs_diff_eq!(back.s1, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn grossly_superunit_vector_rejected() {
        let s = BlochVector::new(1.2, 0.0, 0.0);
        assert!(bloch_to_density(&s).is_err());
        assert!(fidelity_bloch(&s, &BlochVector::new(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn non_density_inputs_rejected() {
        let m = Matrix2::new(
            C64::new(0.5, 0.0),
            C64::new(0.1, 0.2),
            C64::new(0.3, 0.1),
            C64::new(0.5, 0.0),
        );
        assert!(DensityMatrix2::new(m, 1e-9).is_err()); // not Hermitian
        let m = Matrix2::new(
            C64::new(0.7, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.7, 0.0),
        );
        assert!(DensityMatrix2::new(m, 1e-9).is_err()); // trace 1.4
    }

    #[test]
    fn round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let s = random_state(&mut rng);
            let back = density_to_bloch(&bloch_to_density(&s).unwrap());
            assert!((back.s1 - s.s1).abs() < 1e-12);
            assert!((back.s2 - s.s2).abs() < 1e-12);
            assert!((back.s3 - s.s3).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_pure_states() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let down = BlochVector::new(0.0, 0.0, -1.0);
        assert_abs_diff_eq!(fidelity_bloch(&up, &up).unwrap(), 1.0);
        assert_abs_diff_eq!(fidelity_bloch(&up, &down).unwrap(), 0.0);
    }

    #[test]
    fn fidelity_pure_vs_mixed_is_half() {
        // Cross-checked against the Tr^2 sqrt(...) oracle below.
        let pure = BlochVector::new(0.0, 0.0, 1.0);
        let mixed = BlochVector::new(0.0, 0.0, 0.0);
        let f = fidelity_bloch(&pure, &mixed).unwrap();
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-14);
        let fd = fidelity_density(
            &bloch_to_density(&pure).unwrap(),
            &bloch_to_density(&mixed).unwrap(),
        );
        assert_abs_diff_eq!(fd, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_density_orthogonal_pure() {
        let a = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let b = bloch_to_density(&BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        assert_abs_diff_eq!(fidelity_density(&a, &b), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_routes_agree_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s1 = random_state(&mut rng);
            let s2 = random_state(&mut rng);
            let fb = fidelity_bloch(&s1, &s2).unwrap();
            let fd = fidelity_density(
                &bloch_to_density(&s1).unwrap(),
                &bloch_to_density(&s2).unwrap(),
            );
            assert!(
                (fb - fd).abs() < 1e-10,
                "bloch {fb} vs density {fd} for {s1:?}, {s2:?}"
            );
        }
    }

    #[test]
    fn quadrature_rejects_tiny_resolution() {
        assert!(make_quadrature(1).is_err());
    }

    #[test]
    fn quadrature_normalization_and_moments() {
        let q = make_quadrature(16).unwrap();
        assert_abs_diff_eq!(q.integrate(|_| 1.0), 1.0, epsilon = 1e-14);
        // <n3^2> = 1/3 over the unit sphere.
        assert_abs_diff_eq!(q.integrate(|n| n.s3 * n.s3), 1.0 / 3.0, epsilon = 1e-10);
        // Odd moment vanishes.
        assert_abs_diff_eq!(q.integrate(|n| n.s1 * n.s2), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.integrate(|n| n.s1 * n.s1), 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn quadrature_integrates_higher_degree_polynomials() {
        // <n3^4> = 1/5, <n1^2 n2^2> = 1/15, <n1^2 n3^2> = 1/15.
        let q = make_quadrature(16).unwrap();
        assert_abs_diff_eq!(
            q.integrate(|n| n.s3.powi(4)),
            1.0 / 5.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            q.integrate(|n| n.s1 * n.s1 * n.s2 * n.s2),
            1.0 / 15.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            q.integrate(|n| n.s1 * n.s1 * n.s3 * n.s3),
            1.0 / 15.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn quadrature_weights_nonnegative_and_unit_nodes() {
        let q = make_quadrature(8).unwrap();
        for (dir, w) in q.nodes() {
            assert!(*w >= 0.0);
            assert_abs_diff_eq!(dir.unit_bloch().norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn quadrature_resolution_doubling_is_stable() {
        let f = |n: &BlochVector| (1.0 + n.s3 * n.s3 - 0.3 * n.s1).sqrt();
        let a = make_quadrature(32).unwrap().integrate(f);
        let b = make_quadrature(64).unwrap().integrate(f);
        assert!((a - b).abs() < 1e-8, "doubling changed result by {}", a - b);
    }
}
