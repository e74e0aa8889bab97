//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by parsing, validation and resource guards.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input; `pos` is a byte offset into the input.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// An edge list that does not describe a tree.
    #[error("edge list does not describe a tree: {0}")]
    NotATree(String),

    /// A vertex index outside the labeled view.
    #[error("invalid vertex index {index} (tree has {count} vertices)")]
    InvalidVertex { index: usize, count: usize },

    /// Branch and target lists of different lengths passed to a graft.
    #[error("graft length mismatch: {branches} branches vs {targets} targets")]
    GraftLengthMismatch { branches: usize, targets: usize },

    /// A computation refused by a resource guard.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Variable index out of range for the ambient polynomial ring.
    #[error("variable index {index} out of range (ring has {count} variables)")]
    VariableOutOfRange { index: usize, count: usize },

    /// Dimension mismatch between polynomial maps or matrices.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation that requires a homogeneous polynomial input.
    #[error("input must be homogeneous of degree >= {min_degree}")]
    NotHomogeneous { min_degree: u32 },

    /// Invalid parameter value for a quotient-module computation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two independent computation routes disagreed; indicates a defect.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}
