use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    MalformedGraph(String),

    #[error("graph must have at least one cell")]
    EmptyGraph,

    #[error("cell {cell} out of range 1..={cells}")]
    CellOutOfRange { cell: usize, cells: usize },

    #[error("self-loop on cell {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("cell graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("threshold k must be at least 1, got {0}")]
    InvalidThreshold(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state string {0:?}: only '0' and '1' are allowed")]
    InvalidState(String),

    #[error("invalid subspace string {0:?}: only '0', '1' and '*' are allowed")]
    InvalidSubspace(String),

    #[error("state space of dimension {dimension} exceeds the oracle limit {limit}")]
    LimitExceeded { dimension: usize, limit: usize },

    #[error("state {0} is not a fixed point")]
    NotFixedPoint(String),

    #[error("subspace {0} is not a trap space")]
    NotTrapSpace(String),

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("witness step {step} flips position {position}, which is not enabled")]
    WitnessReplay { step: usize, position: usize },
}
