//! Schnyder woods for triangulations of arbitrary genus.
//!
//! A genus-`g` triangulation is traversed by conquests interleaved with `g`
//! splits and `g` merges, which yields an orientation and 3-coloring of its inner
//! edges (a g-Schnyder wood) whose color-2 edges plus `2g` special edges form a
//! cut-graph. The wood drives a compact encoding of the triangulation in
//! `4n + O(g log n)` bits.

pub mod canon;
pub mod codec;
pub mod error;
pub mod generators;
pub mod io;
pub mod map;
pub mod subcomplex;
pub mod traversal;
pub mod wood;

pub use error::{CodecError, GenError, MapError, ParseError, TraversalError};
pub use map::{BrinId, EdgeId, FaceId, Map, VertexId};
pub use traversal::{compute_schnyder, TraversalLog, TraversalOptions};
pub use wood::{Color, GSchnyderWood, ValidationReport};
