use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("pole at q0 = {0}")]
    Pole(f64),
    #[error("no classical limit")]
    NoClassicalLimit,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("not an irreducible flag: {0}")]
    NotIrreducible(String),
    #[error("not implemented for this flag: {0}")]
    NotImplementedForFlag(String),
    #[error("modules are over different acting algebras")]
    MismatchedAlgebras,
    #[error("defining relation fails: {0}")]
    RelationFailure(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("singular map: {0}")]
    Singular(String),
    #[error("normalization rejected: {0}")]
    NormalizationRejected(String),
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
    #[error("lifting pre-map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("not a convex combination")]
    NotConvex,
    #[error("Einstein lift does not exist")]
    NoEinsteinLift,
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),
    #[error("solution is not unique: {0}")]
    NonUniqueSolution(String),
    #[error("not proportional to the metric: {0}")]
    NotProportional(String),
    #[error("expected a grade-zero element, found grade {0}")]
    NonzeroGrade(i64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
