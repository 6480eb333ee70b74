use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
///
/// [`Error::Internal`] is reserved for violated post-conditions, i.e. bugs;
/// everything else is a rejection of the caller's input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero gcd undefined")]
    ZeroGcd,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} of the zero element is undefined")]
    ZeroInput(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("points are linearly dependent")]
    DependentPoints,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("invalid transition data: {0}")]
    InvalidTransition(String),
    #[error("opens do not cover the affine line")]
    NotCovering,
    #[error("inconsistent cocycle: {0}")]
    InconsistentCocycle(String),
    #[error("representation is not good on chart {0}")]
    NotGood(usize),
    #[error("representation is not normal on chart {0}")]
    NotNormal(usize),
    #[error("cannot certify covering for chart {0}")]
    CannotCertifyCovering(usize),
    #[error("refinement of chart {0} produces an identically vanishing a1")]
    DegenerateRefinement(usize),
    #[error("representations do not share a cover: {0}")]
    MismatchedCovers(String),
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("conic is singular")]
    SingularConic,
    #[error("no rational point found on the conic within height {0}")]
    NoRationalPoint(u32),
    #[error("{0} is not a linear form")]
    NotLinear(&'static str),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("line is not a tangent line handled by the fixed transformation")]
    UnsupportedLine,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for bugs (post-condition failures) rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
