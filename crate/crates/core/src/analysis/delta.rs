//! Separable-versus-entangled comparison for the Pauli channel.

use crate::channels::ChannelModel;
use crate::protocols::{ProtocolKind, ProtocolSpec};
use crate::{Error, Result};

use super::{
    mean_error_closed, mean_error_enumerated, AnalysisOptions, CostKind, DeltaReport,
};

/// Mean-error gap `sep - ent` between the two Pauli protocols run with the
/// same number `N` of qubits (`N` divisible by 6 so both protocols fit).
///
/// The statistical gap comes from the closed forms and equals
/// [`super::delta_statistical_closed`]; it is nonnegative for every
/// simplex-valid parameter vector. The fidelity gap is computed by exact
/// enumeration of both outcome spaces.
pub fn delta(
    lambda: [f64; 3],
    n: u64,
    cost: CostKind,
    opts: &AnalysisOptions,
) -> Result<DeltaReport> {
    if n % 6 != 0 || n == 0 {
        return Err(Error::InvalidConfig(format!(
            "comparison needs N divisible by 6, got {n}"
        )));
    }
    let channel = ChannelModel::pauli(lambda)?;
    let sep = ProtocolSpec::new(ProtocolKind::PauliSeparable, n)?;
    let ent = ProtocolSpec::new(ProtocolKind::PauliEntangled, n)?;
    let value = match cost {
        CostKind::Statistical => {
            mean_error_closed(&channel, &sep, cost)?.value
                - mean_error_closed(&channel, &ent, cost)?.value
        }
        CostKind::Fidelity => {
            mean_error_enumerated(&channel, &sep, cost, opts)?.value
                - mean_error_enumerated(&channel, &ent, cost, opts)?.value
        }
    };
    Ok(DeltaReport {
        lambda,
        n,
        cost,
        value,
    })
}
