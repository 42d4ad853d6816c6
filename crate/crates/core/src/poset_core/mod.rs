//! Finite extended posets: pair classification, the simply connected
//! axioms, betweenness, between sets and their `O`-classes.

mod between;
mod poset;
mod relation;

pub use between::{
    between_set, between_set_with, full_suite, is_between, max_class_count, verify_between_theorem,
    verify_between_theorem_with, verify_o_classes, verify_total_order, BetweenChain, BetweenTable,
};
pub(crate) use between::between_raw;
pub use poset::{chain, ExtendedPoset, PosetBuilder};
pub use relation::Relation;

#[cfg(test)]
mod tests;
