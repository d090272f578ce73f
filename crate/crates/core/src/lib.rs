//! Deterministic hypergraph containers.
//!
//! For a bounded, near-homogeneous `k`-uniform hypergraph `H` on
//! `{0, .., n-1}` this crate builds a print/container pair: every independent
//! set `I` gets a short print `P` (a sequence of at most `k-1` small vertex
//! sets inside `I`), and every print a container `C` with
//! `U P <= I <= U P + C` and `|X \ C|` large. The construction recurses on the
//! uniformity through fibers `H_F` and is a pure function of its inputs.
//!
//! Alongside the construction live brute-force oracles (exact maximum bounded
//! subhypergraphs, independent-set enumeration) and a verifier that checks
//! the defining conditions of the pair on concrete instances.

pub mod engine;
pub mod error;
pub mod hypergraph;
pub mod instances;
pub mod oracle;
pub mod par;
pub mod params;
pub mod report;
pub mod verifier;

pub use engine::{Engine, EngineConfig, EngineRef, Mode, Print};
pub use error::{Error, Result};
pub use hypergraph::{Edge, Hypergraph, LogSize, Vertex};
pub use oracle::{greedy_bounded_sub, max_bounded_sub, BoundedOracle, BoundedWitness, GuardPolicy};
pub use par::Execution;
pub use params::Params;
pub use report::{Coverage, VerificationReport};
pub use verifier::{
    counting_bound, enumerate_independent_sets, sample_independent_set, sample_independent_sets,
    verify, PrintContainerPair,
};
