use thiserror::Error;

use crate::space::CoordinateLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent p = {0} is below 1")]
    ExponentBelowOne(String),

    #[error("coordinate {label} lies outside a universe of size {universe_size}")]
    LabelOutsideUniverse {
        label: CoordinateLabel,
        universe_size: u64,
    },

    #[error("coordinate {0} appears twice in one vector")]
    DuplicateLabel(CoordinateLabel),

    #[error("coordinate universes differ ({left} vs {right})")]
    UniverseMismatch { left: u64, right: u64 },

    #[error("spaces are not a dual pair: {left} and {right}")]
    NotDualPair { left: String, right: String },

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    #[error("vector ids must be strictly increasing (got {id} after {previous})")]
    NonIncreasingId { previous: u64, id: u64 },

    #[error("zero member: vector {id} has empty support")]
    ZeroMember { id: u64 },

    #[error("component decomposition does not describe this family")]
    ForeignDecomposition,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("injection is not injective: ({first:?}) and ({second:?}) both map to {label}")]
    NotInjective {
        first: (u64, usize),
        second: (u64, usize),
        label: CoordinateLabel,
    },

    #[error("injection has no label for vector {id} in group {group}")]
    MissingPlacement { id: u64, group: usize },

    #[error("universe of size {universe_size} cannot host {needed} fresh labels")]
    UniverseTooSmall { needed: usize, universe_size: u64 },

    #[error("duality construction needs 1 < p < infinity, got {0}; use the quotient construction")]
    NotReflexive(String),

    #[error("the zero subspace has no Markushevich basis")]
    ZeroSubspace,

    #[error("blocks {first} and {second} share coordinate {label}")]
    OverlappingBlocks {
        first: usize,
        second: usize,
        label: CoordinateLabel,
    },

    #[error("vector for block {block} leaves the block support at {label}")]
    OutsideBlock {
        block: usize,
        label: CoordinateLabel,
    },

    #[error("invalid generator configuration: {0}")]
    Config(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
