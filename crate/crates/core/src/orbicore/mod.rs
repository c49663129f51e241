//! Combinatorial 2-dimensional orbicomplexes.
//!
//! A [`Piece`] is a compact orientable 2-orbifold whose boundary circles are
//! cut into mirror and free segments. An [`Orbicomplex`] glues pieces along
//! their free segments to the edges of a [`MarkedGraph`]; wall-marked
//! vertices of the graph carry the reflections where polygon mirrors meet
//! the gluing locus.

pub mod complex;
pub mod graph;
pub mod iso;
pub mod piece;
pub mod ribbon;

pub use complex::{
    euler_characteristic, singular_subspace, validate_complex, Attachment, Orbicomplex, SegmentRef, Smoothing,
    Violation,
};
pub use graph::{reverse_walk, Dart, Edge, Mark, MarkedGraph, Vertex};
pub use iso::{
    complex_isomorphism, find_isomorphism, marked_graph_isomorphism, search_isomorphisms, topological_form,
    ColoredGraph,
};
pub use piece::{BoundaryCircle, Junction, Piece, PieceType, Segment, SegmentKind};
pub use ribbon::{
    attachment_circuits, canonical_circuit, face_rotation, ribbon_neighborhood, NeighborhoodComponent,
    RibbonNeighborhood, Rotation,
};
