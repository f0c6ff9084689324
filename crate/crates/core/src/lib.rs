//! Ordered graph homomorphisms.
//!
//! Graphs carry a fixed linear order on their vertices (`0..n`) and
//! homomorphisms must be monotone. The crate provides exact backtracking
//! oracles, matching encodings of permutation patterns, a collapse-based
//! solver for homomorphisms into ordered matchings and into unions of a
//! fixed connected core, core extraction, and seeded instance generation.

pub mod brute;
pub mod collapse;
pub mod cores;
pub mod dot;
pub mod error;
pub mod factor;
pub mod format;
pub mod generate;
pub mod graph;
pub mod reduction;
pub mod report;

pub use error::{Error, Result};
pub use graph::{check_hom, validate, ColorId, Cut, Edge, HomMap, OrderedGraph, OrderedMatching, RawEdge, RawGraph, Vertex};
