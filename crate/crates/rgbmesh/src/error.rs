use thiserror::Error;

/// Errors produced by mesh construction and the refine/coarsen kernels.
#[derive(Debug, Error)]
pub enum MeshError {
    /// Element with non-positive signed area (wrong orientation or collapsed).
    #[error("element {element} is degenerate (signed area {area})")]
    DegenerateElement { element: usize, area: f64 },

    /// A node index points outside the coordinate array.
    #[error("{context}: node index {index} out of range (have {len} nodes)")]
    BadIndex {
        context: &'static str,
        index: usize,
        len: usize,
    },

    /// Two coordinates coincide within tolerance.
    #[error("nodes {first} and {second} coincide within tolerance")]
    DuplicateNode { first: usize, second: usize },

    /// An edge is shared by more than two elements.
    #[error("edge ({a}, {b}) is shared by more than two elements")]
    NonManifoldEdge { a: usize, b: usize },

    /// The element array does not follow the RGB storage conventions
    /// (children of one father stored consecutively, etc.).
    #[error("mesh is not a valid RGB refinement: {0}")]
    NotRefinedMesh(String),

    /// Repeated full coarsening reached a fixed point above the initial mesh.
    #[error("coarsening stalled after {steps} steps at {nodes} nodes ({n_initial} initial)")]
    NoProgress {
        steps: usize,
        nodes: usize,
        n_initial: usize,
    },

    /// Malformed text in a `.dat` bundle.
    #[error("parse error in {file} line {line}: {message}")]
    ParseError {
        file: String,
        line: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MeshError>;
