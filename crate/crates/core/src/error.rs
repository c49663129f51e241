use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("defining graph has no vertex of valence at least 3")]
    NoEssentialVertices,
    #[error("defining graph is not connected")]
    DisconnectedGraph,
    #[error("branch ends at a vertex of valence below 3: {0}")]
    DanglingBranch(String),
    #[error("branch too short: n = {0}, need at least 2")]
    BranchTooShort(usize),
    #[error("defining graph is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("piece is not a reflection polygon: {0}")]
    NotAPolygon(String),
    #[error("piece is not a disk orbifold with order-2 cones: {0}")]
    NotADiskOrbifold(String),
    #[error("labeling is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("labeling is not surjective")]
    NotSurjective,
    #[error("complex has mirror segments")]
    MirrorsPresent,
    #[error("unsupported piece: {0}")]
    UnsupportedPiece(String),
    #[error("genus must be at least 1, got {0}")]
    BadGenus(u32),
    #[error("covering map references missing cells: {0}")]
    MismatchedComplexes(String),
    #[error("complex is disconnected")]
    Disconnected,
}
