//! Algebraically reduced series for the one-parameter mean fidelity errors.
//!
//! These are the simplified binomial-sum forms of the outcome-averaged
//! fidelity error. They are NOT used by the evaluation routes; tests verify
//! that the definitional enumeration in [`super::mean_error_enumerated`]
//! reproduces them, which validates the reduction algebra.

use super::binomial_weights;

/// Depolarizing channel:
/// `1 - (1/N) sum_i w(i) (sqrt(l i) + sqrt((1-l)(N-i)))^2`.
pub fn depolarizing_mean_fidelity(lambda: f64, n: u64) -> f64 {
    let w = binomial_weights(n, lambda);
    let nf = n as f64;
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate() {
        let i = i as f64;
        let root = (lambda * i).sqrt() + ((1.0 - lambda) * (nf - i)).sqrt();
        acc += wi * root * root;
    }
    1.0 - acc / nf
}

/// Phase-damping channel:
/// `(4/3) [l (1-l) - (1/N) sum_i w(i) sqrt(l (1-l) i (N-i))]`.
pub fn phase_damping_mean_fidelity(lambda: f64, n: u64) -> f64 {
    let w = binomial_weights(n, lambda);
    let nf = n as f64;
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate() {
        let i = i as f64;
        acc += wi * (lambda * (1.0 - lambda) * i * (nf - i)).sqrt();
    }
    4.0 / 3.0 * (lambda * (1.0 - lambda) - acc / nf)
}

/// Amplitude-damping channel:
/// `(1/3) [1 + l (1-2l) - sqrt((1-l)/N) sum_i w'(i) sqrt(i)
///  - (2/N) sqrt(l (1-l)) sum_i w(i) sqrt(i (N-i))]`
/// where `w` is binomial in `l` and `w'` binomial in `1 - l`.
pub fn amplitude_damping_mean_fidelity(lambda: f64, n: u64) -> f64 {
    let nf = n as f64;
    let w_flip = binomial_weights(n, 1.0 - lambda);
    let mut first = 0.0;
    for (i, wi) in w_flip.iter().enumerate() {
        first += wi * (i as f64).sqrt();
    }
    let w = binomial_weights(n, lambda);
    let mut second = 0.0;
    for (i, wi) in w.iter().enumerate() {
        let i = i as f64;
        second += wi * (i * (nf - i)).sqrt();
    }
    (1.0 + lambda * (1.0 - 2.0 * lambda)
        - ((1.0 - lambda) / nf).sqrt() * first
        - 2.0 / nf * (lambda * (1.0 - lambda)).sqrt() * second)
        / 3.0
}
