use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructions and verifiers.
///
/// Labels are carried in their `Debug` rendering so the error type stays
/// independent of the label type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("label sets differ: {0}")]
    LabelMismatch(String),
    #[error("linear order is not a cut of the circular order: {0}")]
    NotACut(String),
    #[error("mapping is not defined at {0}")]
    PartialMapping(String),
    #[error("image {0} lies outside the codomain")]
    ImageOutsideCodomain(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("size {size} exceeds the configured bound {max}")]
    SizeExceeded { size: usize, max: usize },
    #[error("sequence is not injective: {0} repeats")]
    NotInjective(String),
    #[error("sequence is not a cycle of the host order: {0}")]
    NotACycle(String),
    #[error("empty cycle or chain")]
    EmptyCycle,
    #[error("{0} is not a sub-cycle of {1}")]
    NotSubcycle(String, String),
    #[error("map is not c-order preserving: {0}")]
    NotCop(String),
    #[error("map is not linear-order preserving: {0}")]
    NotLop(String),
    #[error("quotient map is not onto: {0} has an empty fiber")]
    NonSurjective(String),
    #[error("fibers overlap or disagree with the quotient map at {0}")]
    OverlappingFibers(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("window exceeded at {0}")]
    WindowExceeded(String),
    #[error("arguments are not pairwise distinct: {0}")]
    NotDistinct(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    /// Whether the error concerns malformed or out-of-bounds input rather
    /// than a property of well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::UnknownLabel(_)
                | Error::DuplicateLabel(_)
                | Error::LabelMismatch(_)
                | Error::PartialMapping(_)
                | Error::ImageOutsideCodomain(_)
                | Error::DomainMismatch(_)
                | Error::BudgetExceeded { .. }
                | Error::SizeExceeded { .. }
                | Error::EmptyCycle
                | Error::NotInjective(_)
        )
    }
}

pub(crate) fn show<T: std::fmt::Debug>(t: &T) -> String {
    format!("{t:?}")
}
