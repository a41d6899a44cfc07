use thiserror::Error;

/// Errors produced while reading graphs, building partitions or running the
/// partitioner. Node indices in messages are 0-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported graph format: {0}")]
    Unsupported(String),

    #[error("edge ({u}, {v}) has no matching reverse entry of equal weight")]
    Asymmetric { u: usize, v: usize },

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("parallel edge between nodes {u} and {v}")]
    ParallelEdge { u: usize, v: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {node} has block {label}, expected a value below {k}")]
    LabelOutOfRange { node: usize, label: u64, k: usize },

    #[error("expected {expected} labels, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("partition file has {found} lines, graph has {expected} nodes")]
    LineCount { expected: usize, found: usize },

    #[error("mapping entry {index} points to coarse node {target}, coarse partition has {len} nodes")]
    MappingOutOfRange { index: usize, target: u64, len: usize },

    #[error("cannot satisfy block weight limit {l_max}: {reason}")]
    Infeasible { l_max: u64, reason: String },

    #[error("instance too large for exhaustive search (n={n}, k={k}; limits n<=12, k<=4)")]
    InstanceTooLarge { n: usize, k: usize },

    #[error("no assignment satisfies the balance constraint")]
    NoFeasibleAssignment,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParameter(String),

    #[error("clusterings label different node sets ({expected} vs {found} nodes)")]
    NodeSetMismatch { expected: usize, found: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
