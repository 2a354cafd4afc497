use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parameter rejected: {0}")]
    ParameterRejected(String),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("numeric failure: {msg} (best residual {residual:e})")]
    NumericFailure { msg: String, residual: f64 },
    #[error("not salem: {0}")]
    NotSalem(crate::salem::NotSalem),
    #[error("exceptional locus: {0}")]
    ExceptionalLocus(String),
    #[error("indeterminate point: {0}")]
    Indeterminate(String),
    #[error("chart escape: {0}")]
    ChartEscape(String),
    #[error("division degeneracy at index {0}")]
    DivisionDegeneracy(usize),
    #[error("composition domain: {0}")]
    CompositionDomain(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("pattern violation at step {step}: {msg}")]
    PatternViolation { step: usize, msg: String },
    #[error("property violation: {0}")]
    PropertyViolation(String),
    #[error("fixture mismatch: {0}")]
    FixtureMismatch(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
