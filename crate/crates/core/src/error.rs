use thiserror::Error;

use crate::nagata::Rejection;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VqError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("hull of zero or infinite value is undefined")]
    DegenerateValue,
    #[error("empty input")]
    EmptyInput,
    #[error("duplicate multiplier t = {0}")]
    DuplicateMultiplier(u64),
    #[error("gamma sequence is not strictly increasing at index {0}")]
    GammaNotIncreasing(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("tower integrity: {0}")]
    TowerIntegrity(String),
    #[error("element is not in the local ring R")]
    NotInR,
    #[error("residual reduction needs a proper convex subgroup (level {0} is the full group)")]
    FullLevel(usize),
    #[error("invalid level {0} for rank {1}")]
    BadLevel(usize, usize),
    #[error("not a Nagata polynomial: {0}")]
    NotNagata(Rejection),
    #[error("shift is not in the maximal ideal")]
    AlphaNotInMaximal,
    #[error("factor classification: {0}")]
    FactorClassification(String),
    #[error("no factorization available for {0}")]
    OracleMissing(String),
    #[error("more than one factor has a constant term of positive value")]
    NonUnique,
    #[error("factor coefficients are not in R: {0}")]
    FactorNotInR(String),
    #[error("factor list does not multiply back to {0}")]
    FactorMismatch(String),
    #[error("Newton iteration reached an exact root at step {step}: {root}")]
    ExactRoot { step: usize, root: String },
    #[error("sequence needs at least {0} terms")]
    TooFewTerms(usize),
    #[error("sequence is not pseudo-convergent")]
    NotPseudoConvergent,
    #[error("zero polynomial")]
    ZeroPoly,
    #[error("budget too small: {0}")]
    BudgetTooSmall(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("classification aborted: {0}")]
    ClassifyAborted(String),
    #[error("root search failed on {0}")]
    RootSearchFailed(String),
    #[error("tower depth {0} exceeds limit {1}")]
    DepthExceeded(usize, usize),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("value {0} is not in the lattice generated by the weights")]
    NotInLattice(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("fixture: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, VqError>;
