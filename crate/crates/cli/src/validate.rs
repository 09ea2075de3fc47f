//! `validate`: run the cross-route identity checks and report one line per
//! check. Exit 0 iff all pass; a soft warning is printed if the suite
//! exceeds its runtime budget.

use std::time::Instant;

use chanest::validation::{run_all, FaultInjection};
use clap::Args;

use crate::CliError;

const RUNTIME_BUDGET_SECS: f64 = 60.0;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Deliberately perturb one evaluation path (negative control for the
    /// check harness itself).
    #[arg(long, hide = true, value_parser = parse_fault)]
    inject_fault: Option<FaultInjection>,
}

fn parse_fault(text: &str) -> Result<FaultInjection, String> {
    match text {
        "affine-parametrization" => Ok(FaultInjection::AffineParametrization),
        other => Err(format!("unknown fault '{other}'")),
    }
}

pub fn run(args: ValidateArgs) -> Result<i32, CliError> {
    let fault = args.inject_fault.unwrap_or(FaultInjection::None);
    let started = Instant::now();
    let outcomes = run_all(fault);
    let elapsed = started.elapsed().as_secs_f64();
    let mut failures = 0usize;
    for outcome in &outcomes {
        if outcome.passed {
            println!("PASS {}", outcome.name);
        } else {
            failures += 1;
            println!("FAIL {}: {}", outcome.name, outcome.detail);
        }
    }
    println!(
        "{} checks, {} failed, {:.2}s",
        outcomes.len(),
        failures,
        elapsed
    );
    if elapsed > RUNTIME_BUDGET_SECS {
        eprintln!(
            "warning: validation took {elapsed:.1}s, over the {RUNTIME_BUDGET_SECS:.0}s budget"
        );
    }
    Ok(if failures == 0 { 0 } else { 1 })
}
