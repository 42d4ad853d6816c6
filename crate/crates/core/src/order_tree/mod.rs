//! Finite oriented order trees as graphs of arcs with dyadic coordinates:
//! axioms, degrees, standard geodesics and spines, finite rays, and the
//! Denjoy blow-up to a branchless 1-manifold.

mod axioms;
mod blowup;
mod emit;
mod geodesic;
mod graph;
mod rays;

pub use axioms::check_order_tree_axioms;
pub use blowup::{
    apply_point, check_blowup, check_orientation_preserving, denjoy_blowup, lift_map, signature, ArcOrigin,
    NodeOrigin, OneManifold, RayKey, TreeMap,
};
pub use emit::{from_json, manifold_to_dot, to_dot, to_json, FORMAT_VERSION};
pub use geodesic::{
    check_spine_against_cuts, check_spine_uniqueness, geodesic_spine, sample_points, spine_by_cuts, spine_of,
    standard_geodesic, standard_geodesic_with, verify_standard, CuspRecord, Geodesic, GeodesicOptions,
    GeodesicSpine, PointSet, Segment, Span, SpinePart,
};
pub use graph::{
    line_point, zigzag_line, Arc, ArcId, Degrees, LimitId, Move, Node, NodeId, NodeKind, Point, PointClass, RayStart,
    TreeGraph,
};
pub use rays::{finite_ray_endpoint, RayOutcome};

#[cfg(test)]
pub(crate) mod tests;
