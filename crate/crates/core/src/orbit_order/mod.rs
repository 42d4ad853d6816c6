//! Orders read off group actions on trees: the manifold order of a
//! branchless blow-up, orbit posets (with tags from bounds in the
//! manifold), stabilizer refinements, the worked dihedral example and the
//! round trip through the tree construction.

mod action;
mod manifold;
mod orbit;
mod roundtrip;

pub use action::{dihedral_example, line_coordinate, line_map, oriented_line, translation_example, TreeAction};
pub use manifold::{bound_candidates, in_plus, manifold_lt, manifold_order, manifold_order_table};
pub use orbit::{orbit_poset, orbit_poset_from_points, stabilizer_extension_order, OrbitPoset};
pub use roundtrip::{roundtrip, RoundTrip};

#[cfg(test)]
mod tests;
