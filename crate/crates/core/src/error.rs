use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field order {order} exceeds the configured bound {bound}")]
    FieldBound { order: u64, bound: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("GF({0}) admits no involutory automorphism")]
    NoInvolution(usize),

    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration of {requested} candidates exceeds the bound {bound}")]
    EnumerationBound { requested: u64, bound: u64 },
    #[error("subspace is not contained in the ambient space")]
    NotASubspace,

    #[error("operation needs a {expected} form, got {got}")]
    KindMismatch { expected: &'static str, got: &'static str },
    #[error("invalid form data: {0}")]
    InvalidForm(String),
    #[error("form is degenerate")]
    Degenerate,

    #[error("cannot parse space spec {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("inadmissible space parameters: {0}")]
    Inadmissible(String),
    #[error("space has {points} points, above the bound {bound}")]
    PointBound { points: u64, bound: u64 },
    #[error("space axiom violated: {0}")]
    Axiom(String),

    #[error("perp of the empty set is not defined")]
    EmptySet,
    #[error("point index {0} is not in the space")]
    ForeignPoint(usize),
    #[error("points {0} and {1} are not collinear")]
    NotCollinear(usize, usize),
    #[error("points {0} and {1} are equal or collinear")]
    Collinear(usize, usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("singular subspace has rank {got}, expected {expected}")]
    RankViolation { expected: usize, got: usize },
    #[error("space has no underlying form")]
    CombinatorialSpace,
    #[error("two points lie on {0} lines of the enriched linear space")]
    JoiningLine(usize),

    #[error("inadmissible quotient: {0}")]
    InadmissibleQuotient(String),
    #[error("embedding is not full: {0}")]
    NotFull(String),
    #[error("embedding is not injective")]
    NotInjective,
    #[error("no universal embedding of this kind: {0}")]
    NoUniversal(String),

    #[error("two functionals induce the same hyperplane")]
    DuplicateSection,
    #[error("hyperplane has several deepest points")]
    MultipleDeepestPoints,
    #[error("not a generalized quadrangle: {0}")]
    NotGq(String),
    #[error("induced polar space is degenerate: {0}")]
    InducedDegenerate(String),
    #[error("equivalence {name} violated on {space}: {detail}")]
    Equivalence { space: String, name: String, detail: String },
    #[error("witness error: {0}")]
    Witness(String),
}
