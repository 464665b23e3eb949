use thiserror::Error;

/// Errors raised by graph construction and the numerical routines built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0}-{1} has non-positive or non-finite length {2}")]
    NonpositiveLength(String, String, f64),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(String, String),
    #[error("region is empty")]
    EmptyRegion,
    #[error("region does not induce a connected subgraph")]
    DisconnectedRegion,
    #[error("t = {0} is outside (0, 1)")]
    TOutOfRange(f64),
    #[error("distributions carry different total mass ({0} vs {1})")]
    UnbalancedMass(f64, f64),
    #[error("distribution mass sums to {0}, expected 1")]
    NotNormalized(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("edge {0}-{1} touches a leaf, so its equation of motion lacks neighbor data")]
    BoundaryEdge(String, String),
    #[error("scale factor {0} must be positive")]
    NonpositiveScale(f64),
    #[error("ratio {0} must exceed 1")]
    RatioNotGreaterThanOne(f64),
    #[error("q = {0} must be odd")]
    QNotOdd(usize),
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(f64),
    #[error("boundary vertex {0} does not have a unique inward edge")]
    NonUniqueInwardEdge(String),
    #[error("inputs must be positive")]
    NonpositiveInput,
    #[error("graph is not a hexagonal-lattice region: {0}")]
    NotHexRegion(String),
    #[error("graph is not complete")]
    NotComplete,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("graph has {0} vertices, exhaustive matching supports at most 24")]
    TooLarge(usize),
    #[error("matching is not perfect")]
    NotPerfect,
    #[error("invalid ratio chain: {0}")]
    InvalidRatioChain(String),
    #[error("inconsistent parameters: {0}")]
    InconsistentParams(String),
    #[error("setting does not match the graph: {0}")]
    SettingMismatch(String),
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("no free edges")]
    NoFreeEdges,
}

pub type Result<T> = std::result::Result<T, Error>;
