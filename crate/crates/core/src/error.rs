use thiserror::Error;

use crate::gluing::HypothesisReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u8, u8),

    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("resource cap exceeded for {what}: {requested} > {cap}")]
    ResourceCap {
        what: String,
        requested: usize,
        cap: usize,
    },

    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid Demuskin form: {0}")]
    InvalidForm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gluing hypotheses failed: {}", .0.failure_summary())]
    HypothesesFailed(Box<HypothesisReport>),

    #[error("tower aborted at step {step}: {}", .report.failure_summary())]
    TowerAborted {
        step: usize,
        report: Box<HypothesisReport>,
    },

    #[error("certificate digest mismatch: certificate has {certificate}, presentation has {presentation}")]
    DigestMismatch {
        certificate: String,
        presentation: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
