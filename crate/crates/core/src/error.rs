use crate::Rational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("complex failed validation: {}", .0.join("; "))]
    InvalidComplex(Vec<String>),
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("missing Maslov grading for generator `{0}`")]
    MissingGradings(String),
    #[error("ambiguous relative grading: {0}")]
    AmbiguousGrading(String),
    #[error("inconsistent grading constraints: {0}")]
    InconsistentGrading(String),
    #[error("invalid graded complex: {0}")]
    InvalidGradedComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("complex has no flip data; h-maps need it")]
    MissingFlip,
    #[error("region does not apply: {0}")]
    RegionMismatch(String),
    #[error("homology did not stabilize: {0}")]
    NotStabilized(String),
    #[error("torsion inside the tower region at degree {0}")]
    TorsionInTower(Rational),
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("mapping cone grading offsets inconsistent: {0}")]
    OffsetInconsistency(String),
    #[error("Alexander polynomial is not symmetric: {0}")]
    AsymmetricAlexander(String),
    #[error("slope mismatch: {0}")]
    SlopeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
