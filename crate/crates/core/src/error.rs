use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alternative token {0:?}: tokens must be nonempty and contain no whitespace")]
    InvalidToken(String),
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("a tree needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("edge endpoint {0} is not a listed node")]
    UnknownEndpoint(String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("edge {0}-{1} closes a cycle")]
    CycleDetected(String, String),
    #[error("graph is disconnected ({0} components)")]
    DisconnectedGraph(usize),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("node set must be nonempty")]
    EmptySet,

    #[error("not a permutation of the alphabet: {0}")]
    NotAPermutation(String),
    #[error("unknown alternative {0}")]
    UnknownAlternative(String),
    #[error("comparison needs two distinct alternatives, got {0} twice")]
    EqualArguments(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("duplicate preference {0}")]
    DuplicatePreference(String),
    #[error("a domain needs at least one preference")]
    EmptyDomain,
    #[error("a profile needs at least one agent")]
    EmptyProfile,
    #[error("restriction to attained tops leaves {0} alternatives, need at least 3")]
    RestrictionTooSmall(usize),
    #[error("preference index {index} out of range for a domain of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{0} is not a leaf")]
    NotALeaf(String),

    #[error("number of agents must be at least 1")]
    NoAgents,
    #[error("work limit of {0} rule evaluations exceeded")]
    WorkLimitExceeded(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("{0}")]
    Malformed(String),
}
