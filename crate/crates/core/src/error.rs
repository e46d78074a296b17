use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Graph construction, profile compilation, the resolution rules and the
/// reductions all share this one enum so callers can match on a single type.
#[derive(Debug, Error)]
pub enum Error {
    /// An edge refers to an unknown endpoint, has a bad interval, leaves the
    /// sink, duplicates a label, or otherwise violates the graph shape.
    #[error("malformed edge `{label}`: {reason}")]
    MalformedEdge { label: String, reason: String },

    /// Two parallel edges (same tail and head) have intersecting intervals.
    #[error("parallel edges `{first}` and `{second}` overlap in time")]
    OverlappingParallelEdges { first: String, second: String },

    /// A trust-horizon entry looks further back than history allows, or sits
    /// outside the lifespan.
    #[error("trust horizon for voter {voter} at t={time} is invalid: {reason}")]
    DeltaOutOfRange { voter: String, time: u32, reason: String },

    /// A graph-level problem that is not attached to a single edge
    /// (bad lifespan, duplicate vertex names, missing horizon entries, ...).
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    /// Expanding a graph into per-instant edge events would exceed the cap.
    #[error("edge-event expansion would produce {events} events (cap {cap})")]
    EventBlowup { events: u64, cap: u64 },

    /// A deliberation profile violates the action rules (vote absorption,
    /// score shape, group shape, horizon bounds, ...).
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// Positional scores were requested for an empty group ranking.
    #[error("cannot assign positional scores to an empty ranking")]
    EmptyRanking,

    /// A journey is not a connected chain of known edges.
    #[error("broken journey chain: {0}")]
    BrokenChain(String),

    /// The operation needs a confluent (per-vertex unique, tree-shaped)
    /// solution and the input is not one.
    #[error("input solution is not confluent: {0}")]
    NonConfluentInput(String),

    /// A brute-force oracle was asked to run above desk scale.
    #[error("oracle limit exceeded: {0}")]
    ScaleExceeded(String),

    /// The exact rule was asked to handle more delegating voters than its cap.
    #[error("{delegators} delegating voters exceed the exact-rule cap of {cap}")]
    CapExceeded { delegators: usize, cap: usize },

    /// An input does not satisfy a documented precondition of the operation.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The connection subproblem has no solution covering the required set.
    #[error("no connecting tree exists: {0}")]
    Infeasible(String),

    /// A spanning-tree instance does not have the required paired-edge shape.
    #[error("malformed spanning-tree instance: {0}")]
    MalformedTmstInstance(String),

    /// Generator parameters are out of range.
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    /// The optimal connecting tree could not be normalized into per-vertex
    /// unique choices. Only possible off the retrospective precondition.
    #[error("optimal tree does not map back to a confluent solution: {0}")]
    NonConfluentBackMap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
