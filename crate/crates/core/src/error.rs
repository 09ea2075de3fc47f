use thiserror::Error;

/// Errors produced by state construction, channel application, protocol
/// bookkeeping and the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A density matrix or Bloch vector violates its invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A parameter is outside its admissible range, a resolution is too
    /// small, or a protocol divisibility requirement is violated.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Matrix or vector dimensions do not match.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Two channels belong to different families and cannot be compared.
    #[error("channel family mismatch: expected {expected}, got {got}")]
    FamilyMismatch { expected: String, got: String },

    /// The requested evaluation method does not exist for this input.
    #[error("unsupported method: {0}")]
    UnsupportedMethod(String),

    /// Exact enumeration of the outcome space would exceed the configured limit.
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    /// Measurement counts are inconsistent with the protocol that allegedly
    /// produced them.
    #[error("protocol error: {0}")]
    Protocol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
