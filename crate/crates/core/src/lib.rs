//! Cartesian products of graphs: density, arboricity, VC-dimension of
//! product subgraphs, reduction operators, and adjacency labeling.

pub mod classes;
pub mod density;
pub mod error;
pub mod flow;
pub mod graph;
pub mod harness;
pub mod labeling;
pub mod product;
pub mod rational;
pub mod reduction;
pub mod vc;

pub use error::{Error, Result};
pub use graph::{FactorGraph, Graph, VertexOrdering};
pub use product::{ProductSpace, ProductSubgraph, Subproduct};
pub use rational::Rational;
