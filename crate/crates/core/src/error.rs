use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid value `{text}`: {reason}")]
pub struct ParseValueError {
    pub text: String,
    pub reason: &'static str,
}

/// Problems found while reading `.reeb` and `.plc` files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: duplicate {what} {id}")]
    Duplicate {
        line: usize,
        col: usize,
        what: &'static str,
        id: String,
    },
    #[error("{line}:{col}: reference to undeclared vertex {id}")]
    Dangling { line: usize, col: usize, id: u64 },
    #[error("{line}:{col}: face closure violated: {message}")]
    FaceClosure {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: edge {lower} -> {upper} is not strictly increasing")]
    NonMonotone {
        line: usize,
        col: usize,
        lower: u64,
        upper: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("unknown edge {0}")]
    UnknownEdge(u64),
    #[error("edge parameter {0} is not strictly inside (0, 1)")]
    BadParameter(String),
    #[error("graph is invalid: {0}")]
    Invalid(String),
    #[error("negative epsilon {0}")]
    NegativeEpsilon(String),
    #[error("malformed point `{0}` (expected v<id> or e<id>:<s>)")]
    BadPointSyntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosheafError {
    #[error("cosheaf structure: {0}")]
    Structure(String),
    #[error("grid does not refine the cosheaf: {0}")]
    Grid(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistortionError {
    #[error("map is discontinuous on mesh cell {cell}: {reason}")]
    Discontinuous { cell: usize, reason: String },
    #[error("map does not match its mesh: {0}")]
    Shape(String),
    #[error("mesh height must be positive")]
    BadMesh,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate vertex {0}")]
    DuplicateVertex(u64),
    #[error("duplicate simplex {0}")]
    DuplicateSimplex(String),
    #[error("simplex {simplex} references undeclared vertex {vertex}")]
    Dangling { simplex: String, vertex: u64 },
    #[error("simplex {0} repeats a vertex")]
    Degenerate(String),
    #[error("triangle {triangle} is missing its edge {edge}")]
    MissingFace { triangle: String, edge: String },
}
