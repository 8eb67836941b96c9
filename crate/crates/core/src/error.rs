use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("pin {pin} out of range [1, {vertex_count}] in hyperedge {edge}")]
    PinOutOfRange {
        edge: usize,
        pin: i64,
        vertex_count: usize,
    },

    #[error("hyperedge {edge} contains vertex {vertex} more than once")]
    DuplicatePin { edge: usize, vertex: u32 },

    #[error("weights must be positive, got {value} ({what})")]
    NonPositiveWeight { what: String, value: i64 },

    #[error("partition covers {got} vertices but the hypergraph has {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("block id {block} is not below k = {k}")]
    BlockOutOfRange { block: u32, k: u32 },

    #[error("operation requires a bipartition, got k = {0}")]
    NotBipartition(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("vertex {0} is not active")]
    InactiveVertex(u32),

    #[error("cannot contract vertex {0} with itself")]
    SelfContraction(u32),

    #[error("memento at depth {got} is not the top of the contraction stack (depth {expected})")]
    OutOfOrder { expected: usize, got: usize },

    #[error("lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unknown variant `{0}`")]
    UnknownVariant(String),

    #[error("no feasible partition found: heaviest block {heaviest} exceeds limit {limit}")]
    Infeasible { heaviest: u64, limit: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
