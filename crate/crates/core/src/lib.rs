//! Perfect-matching decision procedures for dense k-uniform hypergraphs.

pub mod fraction;
pub mod decision;
pub mod generators;
pub mod hypergraph;
pub mod lattice;
pub mod oracle;
pub mod reachability;
pub mod report;
pub mod vertex_set;

pub use fraction::Fraction;
pub use hypergraph::{Hypergraph, HypergraphError, Matching};
pub use lattice::{EdgeLattice, FullPair, IndexVector, Partition};
pub use oracle::{MatchingOracle, OracleConfig, Outcome};
pub use vertex_set::VertexSet;
