//! Biomolecular event extraction from PubMed abstracts, event-network
//! construction and weighted PageRank ranking of the network's nodes.

pub mod annot;
pub mod corpus;
pub mod extract;
pub mod netgraph;
pub mod rank;
pub mod export;
