use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),

    #[error("field mismatch: p = {0} vs p = {1}")]
    FieldMismatch(u32, u32),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("point not on curve: {0:?}")]
    PointNotOnCurve([u32; 3]),

    #[error("singular point: {0:?}")]
    SingularPoint([u32; 3]),

    #[error("chart unusable at {0:?}: {1}")]
    ChartUnusable([u32; 3], String),

    #[error("non-split node at {0:?}: tangent cone irreducible over F_p")]
    NonSplitNode([u32; 3]),

    #[error("singularity at {0:?} is not an ordinary node: {1}")]
    NotOrdinaryNode([u32; 3], String),

    #[error("undeclared singularity: singular scheme has length {found}, expected {declared} declared nodes")]
    UndeclaredSingularity { declared: usize, found: usize },

    #[error("invalid marked point {0:?}: {1}")]
    InvalidMarkedPoint([u32; 3], String),

    #[error("invalid curve model: {0}")]
    InvalidModel(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("Riemann-Roch mismatch for {bundle}: computed h0 = {computed}, predicted {predicted}")]
    RiemannRochMismatch { bundle: String, computed: usize, predicted: usize },

    #[error("insufficient branch truncation: need order {needed}, cached {cached}")]
    InsufficientTruncation { needed: usize, cached: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size budget exceeded: matrix {rows} x {cols} with {entries} entries (budget {budget}); rerun with --force")]
    BudgetExceeded { rows: usize, cols: usize, entries: u64, budget: u64 },

    #[error("malformed subset: {0}")]
    MalformedSubset(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("fixture file error (line {line}): {msg}")]
    FixtureParse { line: usize, msg: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}
