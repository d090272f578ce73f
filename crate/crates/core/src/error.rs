use thiserror::Error;

use crate::hypergraph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex count must be at least 2, got {n}")]
    TooFewVertices { n: usize },

    #[error("uniformity must be positive")]
    ZeroUniformity,

    #[error("edge {edge:?} has {found} distinct vertices, expected {expected}")]
    WrongArity {
        edge: Vec<Vertex>,
        expected: usize,
        found: usize,
    },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("level {level} out of range: need 1 <= level < {k}")]
    LevelOutOfRange { level: usize, k: usize },

    #[error("parameter {name} = {value} out of range")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("parameters are for {what} = {params} but the hypergraph has {what} = {hypergraph}")]
    ParamsMismatch {
        what: &'static str,
        params: usize,
        hypergraph: usize,
    },

    #[error("exact bounded-subhypergraph search refused: {edges} edges exceed the cap of {cap}")]
    OracleGuard { edges: usize, cap: usize },

    #[error("{size}-element set is not a fingerprint: bound is {bound}")]
    NotFingerprint { size: usize, bound: f64 },

    #[error("fingerprint {fingerprint:?} is not expanding")]
    NotExpanding { fingerprint: Vec<Vertex> },

    #[error("set is not independent: it contains edge {edge:?}")]
    NotIndependent { edge: Vec<Vertex> },

    #[error("print outside the container relation's domain: {0}")]
    PrintOutsideDomain(String),

    #[error("strict mode refused to run: {0}")]
    HypothesisFailed(String),

    #[error("enumeration needs n <= {cap}, got n = {n}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("k must be ≥ 3 for AP instances")]
    ApUniformity { k: usize },

    #[error("AP instances need n >= k (n = {n}, k = {k})")]
    ApTooShort { n: usize, k: usize },

    #[error("target of {target} edges exceeds the {available} available {k}-sets")]
    TooManyEdges {
        target: u128,
        available: u128,
        k: usize,
    },

    #[error("counting bound needs a full enumeration with condition (iii) passing")]
    CountingBoundUnavailable,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("while processing set #{index}: {source}")]
    AtSet {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Strips `AtSet` context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtSet { source, .. } => source.root(),
            other => other,
        }
    }
}
