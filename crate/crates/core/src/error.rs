use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{degree} exceeds the configured cap {cap}")]
    CapExceeded { p: u64, degree: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("exhaustive search needs {needed} candidates but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("vertex set is empty")]
    EmptyX,
    #[error("subset size {size} exceeds vertex count {n}")]
    SizeExceedsN { size: usize, n: usize },
    #[error("vertex set is not independent: {0} and {1} are adjacent")]
    NotIndependent(u32, u32),
    #[error("container condition e^(-alpha r) n <= R fails: {lhs} > {rhs}")]
    ConditionViolated { lhs: f64, rhs: u64 },
    #[error("search exceeded its node budget of {0}")]
    Timeout(u64),
    #[error("graph on {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
