use num_bigint::BigUint;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("image array is not a bijection")]
    NotBijection,
    #[error("point {point} outside domain of size {degree}")]
    OutOfDomain { point: usize, degree: usize },
    #[error("domain mismatch: expected degree {expected}, got {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("too large: group order {order} exceeds bound {bound}")]
    TooLarge { order: BigUint, bound: u64 },
    #[error("generator {generator} splits block {block}")]
    BlockSplit { generator: usize, block: usize },
    #[error("blocks do not partition the domain")]
    BadBlocks,
    #[error("empty tuple list")]
    EmptyTuples,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("not a flag")]
    NotAFlag,
    #[error("unknown type {0:?}")]
    UnknownType(String),
    #[error("duplicate type {0:?}")]
    DuplicateType(String),
    #[error("truncation needs a nonempty set of types")]
    EmptyTypeSet,
    #[error("element ids must be dense: expected id {expected}, found {found}")]
    SparseIds { expected: usize, found: usize },
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("malformed interchange json: {0}")]
    Json(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} too large")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("intermediate degree {base} does not divide {degree}")]
    BadSubfield { base: u32, degree: u32 },
    #[error("projective dimension must be at least 1")]
    BadDimension,
    #[error("size guard: {points} points exceeds {limit}")]
    TooManyPoints { points: usize, limit: usize },
    #[error("points not distinct")]
    NotDistinct,
    #[error("points not collinear")]
    NotCollinear,
    #[error("duality map needs a projective plane, got dimension {0}")]
    NotAPlane(usize),
    #[error("coordinate vector of length {found}, expected {expected}")]
    BadCoordinates { expected: usize, found: usize },
    #[error("zero vector is not a projective point")]
    ZeroVector,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("n must be ≥ {min}")]
    TooSmall { min: usize },
    #[error("unknown face–Petrie rule {0:?} (expected shared-edge, shared-vertex or always)")]
    BadRule(String),
    #[error("size guard: {elements} elements exceeds {limit}")]
    TooManyElements { elements: usize, limit: usize },
    #[error("group of order {order} exceeds coset bound {bound}")]
    GroupTooLarge { order: BigUint, bound: u64 },
    #[error("generator {generator} of subgroup {subgroup} is not in the group")]
    NotASubgroup { subgroup: usize, generator: usize },
    #[error("not a correlation of the truncation")]
    NotACorrelation,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("rank must be ≥ {min}")]
    RankTooSmall { min: usize },
    #[error("rank mismatch: automorphism of F_{expected} applied to a word over {found} generators")]
    RankMismatch { expected: usize, found: usize },
    #[error("images do not form a free basis")]
    NotABasis,
    #[error("cannot parse word token {0:?}")]
    Parse(String),
    #[error("image of subgroup {index} matches no family member; witness generator {witness}")]
    NoMatchingSubgroup { index: usize, witness: String },
    #[error("index {0} outside family")]
    BadIndex(usize),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("too large: {elements} elements exceeds bound {bound}")]
    TooLarge { elements: usize, bound: usize },
    #[error("invalid incidence system: {0}")]
    Invalid(String),
    #[error("not a correlation: {0}")]
    NotACorrelation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
