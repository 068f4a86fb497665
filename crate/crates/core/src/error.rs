use thiserror::Error;

use crate::pointset::PointSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("topology is missing the empty set")]
    MissingEmpty,
    #[error("topology is missing the full point set")]
    MissingFull,
    #[error("opens not closed under union: {0:?} ∪ {1:?}")]
    NotClosedUnderUnion(PointSet, PointSet),
    #[error("opens not closed under intersection: {0:?} ∩ {1:?}")]
    NotClosedUnderIntersection(PointSet, PointSet),
    #[error("set {0:?} has points outside the ground set of {1} points")]
    OutOfRange(PointSet, usize),
    #[error("relation is not reflexive at point {0}")]
    NotReflexive(usize),
    #[error("relation is not transitive: {0} ≤ {1} ≤ {2}")]
    NotTransitive(usize, usize, usize),
    #[error("{0} points exceeds the supported maximum of {1}")]
    TooManyPoints(usize, usize),
    #[error("space would have more than {0} open sets")]
    TooManyOpens(usize),
    #[error("open lattice has {0} elements, bound is {1}")]
    LatticeTooLarge(usize, usize),
    #[error("compactness oracle needs |O_X| ≤ {1}, got {0}")]
    OracleTooLarge(usize, usize),
    #[error("member set is not openly isotone: {0:?} is in, its superset {1:?} is not")]
    NotIsotone(PointSet, PointSet),
    #[error("{0:?} is not an open set")]
    NotOpen(PointSet),
    #[error("{0:?} is not a member of the family")]
    NotAMember(PointSet),
    #[error("{0:?} is not closed")]
    NotClosed(PointSet),
    #[error("{0:?} does not meet every member of the family")]
    NotInGrill(PointSet),
    #[error("families live on different spaces")]
    SpaceMismatch,
    #[error("topologies have different carriers ({0} vs {1} points)")]
    CarrierMismatch(usize, usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("negative weight at point {0}")]
    NegativeWeight(usize),
    #[error("unknown point label {0:?}")]
    UnknownPoint(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("n = {0} is too large for exhaustive enumeration (max {1})")]
    TooLarge(usize, usize),
    #[error("parse error at byte {0}: {1}")]
    Parse(usize, String),
}
