//! The inductive tree construction from a left-invariant simply connected
//! extension on a ball: a normalized between-set decomposition, labelled
//! stages `T_n`, segment orientation, stage-property verification and the
//! induced action on labels.

mod action;
mod context;
mod decomposition;
mod orient;
mod stage;
mod verify;

pub use action::{act_on_labels, LabelAction};
pub use context::BuildContext;
pub use decomposition::{
    greedy_pairs, normalize_decomposition, shortlex_pairs, BetweenDecomposition, DecompositionStage, IntersectionForm, StageCase,
};
pub use orient::{orient_segments, to_graph, OrderTree};
pub use stage::{base_stage, build_stage, build_stages, Gluing, Interval, LabeledTree, TreePoint};
pub use verify::verify_stage_properties;

#[cfg(test)]
mod tests;
