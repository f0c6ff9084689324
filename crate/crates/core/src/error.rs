use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    OutOfRangeVertex { vertex: usize, n: usize },
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("some edges are colored and some are not")]
    PartialColoring,
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("map has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("map sends vertex {vertex} to {image}, target has {bound} vertices")]
    RangeError {
        vertex: usize,
        image: usize,
        bound: usize,
    },
    #[error("{what}: size {size} exceeds the guard of {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("graph is not an ordered matching")]
    NotAMatching,
    #[error("graph is not a disjoint union of copies of the template")]
    NotAnH0Matching,
    #[error("template is not a connected ordered core")]
    TemplateNotCore,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("enumeration bound too large: {0}")]
    BoundTooLarge(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("core certification failed: the computed core admits a non-surjective endomorphism")]
    CertificationFailed,
}
