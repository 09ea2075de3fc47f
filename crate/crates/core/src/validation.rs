//! Cross-route identity checks wiring the crate's modules together.
//!
//! Each check verifies one identity that must hold between independent
//! evaluation paths (parametrization algebra, closed forms, enumeration,
//! quadrature, Choi positivity). The CLI `validate` subcommand runs them and
//! reports one line per check; [`FaultInjection`] deliberately perturbs one
//! path so the harness can prove the checks actually bite.

use nalgebra::{Matrix3, Vector3};

use crate::analysis::{
    self, delta_statistical_closed, mean_error_closed, mean_error_enumerated, series,
    AnalysisOptions, CostKind,
};
use crate::channels::{
    identity_affine_params, is_completely_positive, params_to_affine, AffineMap, ChannelModel,
};
use crate::protocols::{bell_basis, outcome_distribution, ProtocolKind, ProtocolSpec};
use crate::qstate::{
    bloch_to_density, density_to_bloch, fidelity_bloch, fidelity_density, make_quadrature,
    BlochVector,
};

/// Deliberate perturbation for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultInjection {
    #[default]
    None,
    /// Perturbs the affine matrix inside the parametrization check.
    AffineParametrization,
}

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            detail: String::new(),
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }
}

fn check(name: &'static str, run: impl FnOnce() -> Result<(), String>) -> CheckOutcome {
    match run() {
        Ok(()) => CheckOutcome::pass(name),
        Err(detail) => CheckOutcome::fail(name, detail),
    }
}

/// Runs every identity check; all must pass on a healthy build.
pub fn run_all(fault: FaultInjection) -> Vec<CheckOutcome> {
    vec![
        check_affine_parametrization(fault),
        check("bloch-density-roundtrip", bloch_density_roundtrip),
        check("fidelity-dual-route", fidelity_dual_route),
        check("quadrature-moments", quadrature_moments),
        check("closed-vs-enumeration", closed_vs_enumeration),
        check("fidelity-series", fidelity_series),
        check("choi-positivity", choi_positivity),
        check("bell-orthonormality", bell_orthonormality),
        check("qudit-qubit-equivalence", qudit_qubit_equivalence),
        check("delta-nonnegativity", delta_nonnegativity),
        check("universal-form", universal_form),
    ]
}

fn check_affine_parametrization(fault: FaultInjection) -> CheckOutcome {
    check("affine-parametrization", move || {
        let mut map = params_to_affine(&identity_affine_params()).map_err(|e| e.to_string())?;
        if fault == FaultInjection::AffineParametrization {
            map.m[(0, 0)] += 1e-3;
        }
        let dev = (map.m - Matrix3::identity()).norm() + map.v.norm();
        if dev > 1e-12 {
            return Err(format!(
                "identity parameters map to a non-identity channel (deviation {dev:.3e})"
            ));
        }
        // Branch probability of the 12-parameter protocol reads the
        // parameter directly.
        let mut lambda = identity_affine_params();
        lambda[6] = 0.83;
        lambda[1] = 0.29;
        let c = ChannelModel::general_affine(lambda).map_err(|e| e.to_string())?;
        let spec = ProtocolSpec::new(ProtocolKind::General12, 12).map_err(|e| e.to_string())?;
        let dist = outcome_distribution(&c, &spec).map_err(|e| e.to_string())?;
        for (j, branch) in dist.iter().enumerate() {
            if (branch[0] - lambda[j]).abs() > 1e-12 {
                return Err(format!(
                    "branch {} spin-up probability {} differs from parameter {}",
                    j + 1,
                    branch[0],
                    lambda[j]
                ));
            }
        }
        Ok(())
    })
}

fn bloch_density_roundtrip() -> Result<(), String> {
    for &(s1, s2, s3) in &[
        (0.0, 0.0, 0.0),
        (0.0, 0.0, 1.0),
        (1.0, 0.0, 0.0),
        (0.3, -0.4, 0.5),
        (-0.57, 0.21, -0.7),
    ] {
        let s = BlochVector::new(s1, s2, s3);
        let back = density_to_bloch(&bloch_to_density(&s).map_err(|e| e.to_string())?);
        let dev = (back.s1 - s.s1).abs() + (back.s2 - s.s2).abs() + (back.s3 - s.s3).abs();
        if dev > 1e-12 {
            return Err(format!("round trip deviates by {dev:.3e} at {s:?}"));
        }
    }
    Ok(())
}

fn fidelity_dual_route() -> Result<(), String> {
    let states = [
        BlochVector::new(0.0, 0.0, 0.9),
        BlochVector::new(0.5, 0.1, -0.3),
        BlochVector::new(-0.2, 0.6, 0.4),
        BlochVector::new(0.0, 0.0, 0.0),
    ];
    for a in &states {
        for b in &states {
            let via_bloch = fidelity_bloch(a, b).map_err(|e| e.to_string())?;
            let via_density = fidelity_density(
                &bloch_to_density(a).map_err(|e| e.to_string())?,
                &bloch_to_density(b).map_err(|e| e.to_string())?,
            );
            if (via_bloch - via_density).abs() > 1e-10 {
                return Err(format!(
                    "Bloch fidelity {via_bloch} vs matrix fidelity {via_density}"
                ));
            }
        }
    }
    Ok(())
}

fn quadrature_moments() -> Result<(), String> {
    let quad = make_quadrature(16).map_err(|e| e.to_string())?;
    let one = quad.integrate(|_| 1.0);
    if (one - 1.0).abs() > 1e-13 {
        return Err(format!("normalization integrates to {one}"));
    }
    let second = quad.integrate(|n| n.s3 * n.s3);
    if (second - 1.0 / 3.0).abs() > 1e-10 {
        return Err(format!("second moment integrates to {second}"));
    }
    Ok(())
}

fn closed_vs_enumeration() -> Result<(), String> {
    let opts = AnalysisOptions::default();
    let mut cases: Vec<(ChannelModel, ProtocolSpec)> = Vec::new();
    for i in 0..=4 {
        let l = i as f64 / 8.0;
        cases.push((
            ChannelModel::depolarizing(l).map_err(|e| e.to_string())?,
            ProtocolSpec::new(ProtocolKind::DepolarizingSingle, 11).unwrap(),
        ));
        cases.push((
            ChannelModel::phase_damping(l).map_err(|e| e.to_string())?,
            ProtocolSpec::new(ProtocolKind::PhaseSingle, 17).unwrap(),
        ));
        cases.push((
            ChannelModel::amplitude_damping(2.0 * l).map_err(|e| e.to_string())?,
            ProtocolSpec::new(ProtocolKind::AmplitudeSingle, 23).unwrap(),
        ));
    }
    let pauli = ChannelModel::pauli([0.15, 0.1, 0.25]).unwrap();
    cases.push((
        pauli.clone(),
        ProtocolSpec::new(ProtocolKind::PauliSeparable, 18).unwrap(),
    ));
    cases.push((
        pauli,
        ProtocolSpec::new(ProtocolKind::PauliEntangled, 18).unwrap(),
    ));
    let mut g12 = identity_affine_params();
    g12[4] = 0.4;
    cases.push((
        ChannelModel::general_affine(g12).unwrap(),
        ProtocolSpec::new(ProtocolKind::General12, 24).unwrap(),
    ));
    for (channel, spec) in &cases {
        let closed = mean_error_closed(channel, spec, CostKind::Statistical)
            .map_err(|e| e.to_string())?
            .value;
        let enumerated = mean_error_enumerated(channel, spec, CostKind::Statistical, &opts)
            .map_err(|e| e.to_string())?
            .value;
        if (closed - enumerated).abs() > 1e-12 {
            return Err(format!(
                "{} at N={}: closed {closed} vs enumeration {enumerated}",
                spec.kind.name(),
                spec.n
            ));
        }
    }
    Ok(())
}

fn fidelity_series() -> Result<(), String> {
    let opts = AnalysisOptions::default();
    for n in [1u64, 3, 7] {
        for i in 0..=5 {
            let l = i as f64 / 10.0;
            let cases: [(ChannelModel, ProtocolKind, f64); 3] = [
                (
                    ChannelModel::depolarizing(l / 2.0).unwrap(),
                    ProtocolKind::DepolarizingSingle,
                    series::depolarizing_mean_fidelity(l / 2.0, n),
                ),
                (
                    ChannelModel::phase_damping(l / 2.0).unwrap(),
                    ProtocolKind::PhaseSingle,
                    series::phase_damping_mean_fidelity(l / 2.0, n),
                ),
                (
                    ChannelModel::amplitude_damping(l).unwrap(),
                    ProtocolKind::AmplitudeSingle,
                    series::amplitude_damping_mean_fidelity(l, n),
                ),
            ];
            for (channel, kind, expected) in cases {
                let spec = ProtocolSpec::new(kind, n).unwrap();
                let enumerated = mean_error_enumerated(&channel, &spec, CostKind::Fidelity, &opts)
                    .map_err(|e| e.to_string())?
                    .value;
                if (enumerated - expected).abs() > 1e-10 {
                    return Err(format!(
                        "{} N={n} lambda={l}: enumeration {enumerated} vs series {expected}",
                        kind.name()
                    ));
                }
            }
        }
    }
    Ok(())
}

fn choi_positivity() -> Result<(), String> {
    for i in 0..=4 {
        let l = i as f64 / 8.0;
        let models = [
            ChannelModel::depolarizing(l).unwrap(),
            ChannelModel::phase_damping(l).unwrap(),
            ChannelModel::amplitude_damping(2.0 * l).unwrap(),
            ChannelModel::pauli([l, 0.5 - l, l / 2.0]).unwrap(),
        ];
        for c in models {
            let choi = c.to_choi().map_err(|e| e.to_string())?;
            if !is_completely_positive(&choi, 1e-10) {
                return Err(format!(
                    "{c:?} fails positivity, min eigenvalue {}",
                    choi.min_eigenvalue()
                ));
            }
        }
    }
    // Negative control: transposition is positive but not completely
    // positive.
    let transpose = AffineMap::new(
        Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0)),
        Vector3::zeros(),
    );
    let choi = transpose.to_choi().map_err(|e| e.to_string())?;
    if is_completely_positive(&choi, 1e-10) {
        return Err("transpose map passes the positivity check".into());
    }
    Ok(())
}

fn bell_orthonormality() -> Result<(), String> {
    for dim in 2..=5 {
        let basis = bell_basis(dim).map_err(|e| e.to_string())?;
        for (i, vi) in basis.iter().enumerate() {
            for (j, vj) in basis.iter().enumerate() {
                let inner = vi.dotc(vj);
                let expected = if i == j { 1.0 } else { 0.0 };
                if (inner - num_complex::Complex64::new(expected, 0.0)).norm() > 1e-12 {
                    return Err(format!("Gram deviation at D={dim} entry ({i},{j})"));
                }
            }
        }
    }
    Ok(())
}

fn qudit_qubit_equivalence() -> Result<(), String> {
    let (p1, p2, p3) = (0.2, 0.1, 0.15);
    let qudit = ChannelModel::generalized_pauli(
        2,
        vec![vec![1.0 - p1 - p2 - p3, p1], vec![p3, p2]],
    )
    .map_err(|e| e.to_string())?;
    let pauli = ChannelModel::pauli([p1, p2, p3]).unwrap();
    for &(s1, s2, s3) in &[(0.2, -0.1, 0.5), (0.0, 0.0, 1.0), (-0.4, 0.4, -0.2)] {
        let s = BlochVector::new(s1, s2, s3);
        let a = qudit.apply(&s).map_err(|e| e.to_string())?;
        let b = pauli.apply(&s).unwrap();
        let dev = (a.s1 - b.s1).abs() + (a.s2 - b.s2).abs() + (a.s3 - b.s3).abs();
        if dev > 1e-12 {
            return Err(format!("actions differ by {dev:.3e} at {s:?}"));
        }
    }
    Ok(())
}

fn delta_nonnegativity() -> Result<(), String> {
    let opts = AnalysisOptions::default();
    for a in 0..=5 {
        for b in 0..=(5 - a) {
            for c in 0..=(5 - a - b) {
                let lambda = [a as f64 / 5.0, b as f64 / 5.0, c as f64 / 5.0];
                let report = analysis::delta(lambda, 6, CostKind::Statistical, &opts)
                    .map_err(|e| e.to_string())?;
                let closed = delta_statistical_closed(&lambda, 6);
                if (report.value - closed).abs() > 1e-12 {
                    return Err(format!(
                        "closed-form mismatch at {lambda:?}: {} vs {closed}",
                        report.value
                    ));
                }
                if report.value < -1e-15 {
                    return Err(format!("negative gap {} at {lambda:?}", report.value));
                }
            }
        }
    }
    Ok(())
}

fn universal_form() -> Result<(), String> {
    let cases: Vec<(ChannelModel, ProtocolSpec)> = vec![
        (
            ChannelModel::depolarizing(0.35).unwrap(),
            ProtocolSpec::new(ProtocolKind::DepolarizingSingle, 9).unwrap(),
        ),
        (
            ChannelModel::pauli([0.2, 0.25, 0.1]).unwrap(),
            ProtocolSpec::new(ProtocolKind::PauliEntangled, 14).unwrap(),
        ),
        (
            ChannelModel::general_affine(identity_affine_params()).unwrap(),
            ProtocolSpec::new(ProtocolKind::General12, 36).unwrap(),
        ),
        (
            ChannelModel::generalized_pauli(
                2,
                vec![vec![0.6, 0.2], vec![0.15, 0.05]],
            )
            .unwrap(),
            ProtocolSpec::with_dim(ProtocolKind::QuditPauliEntangled, 10, Some(2)).unwrap(),
        ),
    ];
    for (channel, spec) in &cases {
        let l = analysis::universal_l(spec.kind)
            .ok_or_else(|| format!("{} has no universal constant", spec.kind.name()))?;
        let lambda = channel.free_params();
        let expected =
            l / spec.n as f64 * lambda.iter().map(|x| x * (1.0 - x)).sum::<f64>();
        let closed = mean_error_closed(channel, spec, CostKind::Statistical)
            .map_err(|e| e.to_string())?
            .value;
        if (closed - expected).abs() > 1e-12 {
            return Err(format!(
                "{}: closed {closed} vs universal form {expected}",
                spec.kind.name()
            ));
        }
    }
    Ok(())
}
