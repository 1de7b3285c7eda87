//! Crate-wide error type. Every named failure path surfaces as a variant;
//! nothing is silently ignored.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Text that does not parse as a partition, graph, gadget, or metadata file.
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation was called with inputs of mismatched size
    /// (e.g. a character of a partition against a format of different weight).
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// A structural precondition failed (the message names the violated inequality).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Resource preconditions of every reduction route failed.
    #[error("insufficient resources: {0}")]
    InsufficientResources(String),

    /// A skew shape admits no domino tiling.
    #[error("shape is not tileable by dominos")]
    Untileable,

    /// Exhaustive gadget search ended without a verified gadget.
    /// Extend the weight alphabet and retry.
    #[error("no gadget found in the declared search space: {0}")]
    GadgetNotFound(String),

    /// An internal invariant that is guaranteed by theory failed; this would
    /// falsify a proved statement and is surfaced loudly rather than ignored.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
