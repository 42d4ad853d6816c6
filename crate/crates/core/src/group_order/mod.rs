//! Finitely generated groups with cone-defined left-invariant orders:
//! axiom checks on balls, the augmented set `G⁺`, complete convexity and
//! quotient orders.

mod cone;
mod gplus;
mod group;
pub mod presets;
mod quotient;

pub use cone::{
    check_between_equivariance, check_left_invariance, classify_group, induced_ball_poset, magnus_coefficient,
    magnus_sign, poset_on, verify_cone_axioms, CmpOp, ConeExpr, ConeStructure, Flags,
};
pub use gplus::{
    blow_up_gplus, check_augmented_between, check_no_singleton_classes, check_r_equivalence, r_equivalent,
    AugmentedElement, GPlus, Tag,
};
pub use group::{Ball, GroupModel, Word};
pub use quotient::{
    check_completely_convex, check_coset_properties, check_normal, check_subgroup, quotient_order, CosetPoset,
};
