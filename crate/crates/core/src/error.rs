use thiserror::Error;

/// Library-wide error type.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("triangle is degenerate (vertices are collinear)")]
    DegenerateTriangle,

    #[error("point ({x}, {y}) lies outside every triangle of the mesh")]
    PointOutsideMesh { x: String, y: String },

    #[error("record {index} lies outside the mesh")]
    RecordOutsideMesh { index: usize },

    #[error("triangles {0} and {1} share all three vertices")]
    DuplicateTriangle(usize, usize),

    #[error("triangles {0} and {1} have overlapping interiors")]
    OverlappingTriangles(usize, usize),

    #[error("transversal point lies on the shared edge line")]
    TransversalOnEdge,

    #[error("matrix dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("smoothness order {r} exceeds polynomial degree {d}")]
    OrderExceedsDegree { r: u32, d: u32 },

    #[error("constraint matrix did not reduce to canonical single-monomial form")]
    NonCanonicalConstraint,

    #[error("constructed basis failed the continuity post-check at order {order}")]
    ContinuityPostCheckFailed { order: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("basis/mesh hash mismatch: basis was built for a different mesh")]
    MeshHashMismatch,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
