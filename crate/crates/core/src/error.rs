use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("graph needs at least {needed} vertices, has {found}")]
    TooFewVertices { needed: usize, found: usize },
    #[error("factor {0} is not connected")]
    DisconnectedFactor(usize),
    #[error("a product needs at least one factor")]
    NoFactors,
    #[error("invalid product vertex {0:?}")]
    InvalidTuple(Vec<usize>),
    #[error("{0} is not a product edge")]
    NotProductEdge(String),
    #[error("operation requires an induced subgraph")]
    NotInduced,
    #[error("{what} has {size} vertices, above the cap of {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error("a subproduct must select at least one factor")]
    EmptySubproduct,
    #[error("invalid subproduct: {0}")]
    InvalidSubproduct(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("insufficient classes for this construction (k = {k}, degeneracy = {degeneracy})")]
    InsufficientClasses { k: usize, degeneracy: usize },
    #[error("infeasible, density exceeds d (d = {d}, density = {density})")]
    Infeasible { d: usize, density: String },
    #[error("clique factor, use Hamming base case")]
    CliqueFactor,
    #[error("vertex {0} has no opposite vertex in its factor")]
    NoOpposite(usize),
    #[error("factor {0} is not a suboctahedron")]
    NotSuboctahedron(usize),
    #[error("factor {0} is not dismantlable")]
    NotDismantlable(usize),
    #[error("malformed label: {0}")]
    MalformedLabel(String),
    #[error("invalid forest decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("no density preset for this instance; supply mu explicitly")]
    MissingMu,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
