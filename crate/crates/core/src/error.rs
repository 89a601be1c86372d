use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a square in the ground extension")]
    NotASquare,
    #[error("odd valuation has no square root")]
    OddValuation,
    #[error("argument is not a unit")]
    NotAUnit,
    #[error("argument outside the convergence domain of {0}")]
    OutOfConvergenceDomain(&'static str),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("degenerate frame: boundary points are not distinct")]
    DegenerateFrame,
    #[error("generator {0} is not hyperbolic")]
    NonHyperbolicGenerator(usize),
    #[error("no disjoint half-tree labeling within the offset window; first violation: {first} meets {second}")]
    NoValidLabeling { first: String, second: String },
    #[error("reduction to the fundamental domain did not terminate within {0} steps")]
    NonTermination(usize),
    #[error("core vertex set did not stabilize between word lengths {0} and {1}")]
    NotStabilized(usize, usize),
    #[error("point is not a limit point: {0}")]
    NotLimitPoints(String),
    #[error("frontier budget exceeded: {0}")]
    FrontierBudgetExceeded(String),
    #[error("degenerate ball: leading term does not dominate at radius {0}")]
    DegenerateBall(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
