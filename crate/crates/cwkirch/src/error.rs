use thiserror::Error;

/// Errors produced by the library operations.
///
/// Identity *failures* are not errors: verification routines return report
/// objects carrying both sides of each identity. Errors signal violated
/// preconditions or malformed input.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degree {degree} out of range for a complex of dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },

    #[error("cell index {index} out of range in degree {degree} (count {count})")]
    CellIndexOutOfRange {
        degree: usize,
        index: usize,
        count: usize,
    },

    #[error("chain vector has {found} coordinates, expected {expected}")]
    ChainLength { expected: usize, found: usize },

    #[error("cell subset is not a spanning tree: {reason}")]
    NotSpanningTree { reason: String },

    #[error("lattice vectors are linearly dependent")]
    DependentVectors,

    #[error("lattice rank mismatch: sub has rank {sub}, sup has rank {sup}")]
    LatticeRankMismatch { sub: usize, sup: usize },

    #[error("sublattice is not contained in the given lattice")]
    NotContained,

    #[error("boundary current p does not lie in the boundary space B_{{d-1}}")]
    NotABoundaryCurrent,

    #[error("cycle voltage q is not a cycle (D_d q != 0)")]
    NotACycleVoltage,

    #[error("projection hypothesis fails for the given subgroup: {reason}")]
    HypothesisFailed { reason: String },

    #[error("weight assignment is not good for the tree: cell {cell} violates the goodness bound")]
    WeightsNotGood { cell: usize },

    #[error("nonpositive weight at degree {degree}, cell {index}")]
    NonpositiveWeight { degree: usize, index: usize },

    #[error("weight list for degree {degree} has {found} entries, expected {expected}")]
    WeightCount {
        degree: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid homology truncation in degree {degree}: {reason}")]
    InvalidTruncation { degree: usize, reason: String },

    #[error("degenerate combinatorial basis: {reason}")]
    DegenerateBasis { reason: String },

    #[error("cannot parse rational from {0:?}")]
    BadRational(String),

    #[error("document error: {0}")]
    Document(String),
}
