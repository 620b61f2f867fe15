use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A matrix or triangle failed its type invariants. `index` is the first
    /// offending position in the object's own indexing convention.
    #[error("invalid {kind} at {index:?}: {reason}")]
    Invalid {
        kind: &'static str,
        index: (usize, usize),
        reason: String,
    },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("order {n} out of supported range {min}..={max}")]
    OrderOutOfRange { n: usize, min: usize, max: usize },

    #[error("enumeration bound exceeded: {what} needs {needed}, bound is {bound}")]
    BoundExceeded {
        what: &'static str,
        needed: usize,
        bound: usize,
    },

    #[error("poset is not a lattice: elements {0} and {1} have no unique {2}")]
    NotALattice(usize, usize, &'static str),

    /// The ASM is not a covexillary permutation matrix, so the requested
    /// depth-antichain data does not exist. Never a silent wrong value.
    #[error("not covexillary: {0}")]
    NotCovexillary(String),

    #[error("matrix is permutational, no -1 certificate exists")]
    Permutational,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
