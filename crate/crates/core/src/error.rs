use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("bad exponent at position {pos}: exponents must be non-negative integers")]
    BadExponent { pos: usize },
    #[error("the zero polynomial has no isolated real roots")]
    ZeroPolynomial,
    #[error("determinant of the matrix is identically zero")]
    SingularMatrix,
    #[error("impasse function is identically zero")]
    ZeroDelta,
    #[error("empty support")]
    EmptySupport,
    #[error("the Newton polygon has no slanted main segment")]
    NoSlantedSegment,
    #[error("weights must be positive, got ({0}, {1})")]
    NonPositiveWeight(i64, i64),
    #[error("point lies outside the chart overlap")]
    OutsideOverlap,
    #[error("algebraic points are only supported on a coordinate line")]
    OffDivisorAlgebraicPoint,
    #[error("degenerate input: adjoint field vanishes identically")]
    DegenerateInput,
    #[error("non-elementary point with irrational coordinates: {0}")]
    NonRationalCenter(String),
    #[error("resolution exceeded maximum depth {0}")]
    MaxDepthExceeded(usize),
    #[error("elementary point matches no basic model: {0}")]
    UnclassifiableLocalModel(String),
    #[error("no controllable shear found among {0} candidates")]
    ShearExhausted(usize),
    #[error("impasse set is not the graph of a polynomial over the chosen axis")]
    ImpasseNotGraph,
    #[error("impasse curve is singular at the origin")]
    SingularImpasse,
    #[error("impasse function is not an ADE normal form")]
    NotNormalForm,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index out of range for the logarithmic basis: ({0}, {1})")]
    IndexOutOfRange(i64, i64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Malformed polynomial text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::BadExponent { .. })
    }

    /// The resolution stopped before every point became elementary.
    pub fn is_resolution(&self) -> bool {
        matches!(
            self,
            Error::NonRationalCenter(_) | Error::MaxDepthExceeded(_) | Error::UnclassifiableLocalModel(_)
        )
    }
}
