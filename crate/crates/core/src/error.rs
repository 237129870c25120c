use thiserror::Error;

/// Errors raised by the engine. Infeasibility verdicts (odd cycles, pin
/// clashes, unreachable fluxes) are results, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("subcomplex is not closed: {0}")]
    NotClosed(String),

    #[error("vector is not in the span of the cocycle space")]
    NotInSpan,

    #[error("subspace is not contained in the ambient span")]
    NotSubspace,

    #[error("cochain is not a cocycle{0}")]
    NotCocycle(String),

    #[error("walk is not closed")]
    OpenWalk,

    #[error("walk leaves the constraint graph at edge {0}")]
    WalkLeavesGraph(usize),

    #[error("no constraint edge joins vertices {0} and {1}")]
    MissingEdge(usize, usize),

    #[error("non-simple face {0}; pre-subdivide")]
    NonSimpleFace(usize),

    #[error("degenerate triangulation: {0}")]
    DegenerateTriangulation(String),

    #[error("fundamental class undefined: {0}")]
    NotClosedSurface(String),

    #[error("assignment touches constraint edge {0}")]
    ConstraintEdge(usize),

    #[error("region boundary leaves the constraint graph at free edges {0:?}")]
    BoundaryNotConstrained(Vec<usize>),

    #[error("aperture must be contractible: window length {window} >= cycle length {cycle}")]
    ApertureNotContractible { window: usize, cycle: usize },

    #[error("base is not a single cycle: {0}")]
    NotACycle(String),

    #[error("edge {0} is on the frozen boundary")]
    FrozenEdge(usize),

    #[error("index {index} out of range for {what} (count {count})")]
    OutOfRange { what: &'static str, index: usize, count: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("empty constraint graph")]
    EmptyConstraintGraph,

    #[error("complexes do not match")]
    ComplexMismatch,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
