use thiserror::Error;

use crate::map::{EdgeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("edge {u}-{v} is traversed twice in the same direction")]
    NonOrientable { u: VertexId, v: VertexId },
    #[error("edge {u}-{v} has {incidences} face incidences (expected 2)")]
    OpenSurface { u: VertexId, v: VertexId, incidences: usize },
    #[error("map is disconnected")]
    Disconnected,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("vertex {0} has no incident edge")]
    IsolatedVertex(VertexId),
    #[error("face {0} has fewer than two sides")]
    DegenerateFace(usize),
    #[error("Euler characteristic {0} does not give an integer genus")]
    OddEuler(i64),
    #[error("corrupt map: {0}")]
    Corrupt(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraversalError {
    #[error("input is not a simple triangulation")]
    NotTriangulation,
    #[error("triangulation needs at least 4 vertices")]
    TooSmall,
    #[error("root face {0} does not exist")]
    BadRootFace(usize),
    #[error("no update candidate while {remaining} faces remain outside the conquered region")]
    InternalStuck { remaining: usize },
    #[error("corner at brin {0} is not free")]
    NotFree(u32),
    #[error("edge {0} is not a chordal edge of the requested kind")]
    WrongKind(EdgeId),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("wood is not a traversal output: {0}")]
    NotTraversalWood(String),
    #[error("tree word is not a balanced parenthesis word")]
    MalformedW,
    #[error("special-edge record {0} is invalid")]
    MalformedSpecial(usize),
    #[error("color-1 parenthesis word is not balanced")]
    UnmatchedColor1,
    #[error("cannot complete color-0 edges: {0}")]
    NonTriangulable(String),
    #[error("bad magic bytes")]
    BadMagic,
    #[error("stream truncated")]
    TruncatedStream,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("grid torus needs p, q >= 3 (got {p} x {q})")]
    TooSmall { p: usize, q: usize },
    #[error("need at least 4 vertices (got {0})")]
    TooFewVertices(usize),
    #[error("no pair of vertex-disjoint faces admits a simple handle")]
    NoDisjointFaces,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
