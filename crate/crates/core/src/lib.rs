//! Thompson's group `F`, the Brown-Thompson groups `F(n)`, and the knot and
//! link diagrams built from their tree-pair diagrams.

pub mod action;
pub mod cli;
pub mod coloring;
pub mod dyadic;
pub mod error;
pub mod fixtures;
pub mod fp;
pub mod group;
pub mod links;
pub mod random;
pub mod snf;
pub mod svg;
pub mod trees;

pub use dyadic::DyadicRational;
pub use error::{Error, Result};
pub use group::{evaluate_word, finite_relators, generator, infinite_relators, phi_q, pl_map, unphi_q, GroupWord, PLMap, TreeDiagram};
pub use trees::{NaryTree, Node, Word};
