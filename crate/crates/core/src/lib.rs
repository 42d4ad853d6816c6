//! Left-invariant partial orders on groups and oriented order trees, at
//! finite scale: extended posets and betweenness, cone-defined orders on
//! group balls, combinatorial order trees with Denjoy blow-up, the inductive
//! tree construction from an order, and orbit orders read back off a tree.

pub mod cli;
pub mod dyadic;
pub mod error;
pub mod group_order;
pub mod orbit_order;
pub mod order_tree;
pub mod poset_core;
pub mod report;
pub mod tree_build;

pub use error::{Error, Result};
