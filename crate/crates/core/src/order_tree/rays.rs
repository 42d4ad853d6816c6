use serde::Serialize;

use super::geodesic::{geodesic_spine, PointSet, Span};
use super::graph::{NodeId, Point, TreeGraph};
use crate::error::{Error, Result};
use crate::report::Check;

#[derive(Debug, Clone, Serialize)]
pub enum RayOutcome {
    /// The ray converges; several endpoints are pairwise non-separable.
    Endpoints { endpoints: Vec<NodeId>, non_separable: bool, check: Check },
    /// The ray runs into an open end with nothing at its limit.
    EscapesTruncation { open_end: NodeId },
}

/// Endpoints of the ray `⋃ GS(base, y_k)` where the `y_k` march along one
/// arc towards one of its ends. Checks nesting of the spines and
/// `ρ = GS(a, base) − {a}` for every endpoint `a` (up to the part of the
/// final arc beyond the last sample).
pub fn finite_ray_endpoint(t: &TreeGraph, base: Point, samples: &[Point]) -> Result<RayOutcome> {
    let last = *samples.last().ok_or_else(|| Error::Domain("a ray needs at least one sample".into()))?;
    let Point::Arc(arc, c_last) = last else {
        return Err(Error::Domain("ray samples must lie inside an arc".into()));
    };
    let coords: Vec<_> = samples
        .iter()
        .filter_map(|p| match p {
            Point::Arc(a, c) if *a == arc => Some(*c),
            _ => None,
        })
        .collect();
    let toward_hi = if coords.len() >= 2 {
        coords[coords.len() - 1] > coords[coords.len() - 2]
    } else {
        match t.walk(base, last)?.last() {
            Some(super::graph::Move::Along { from, to, .. }) => to > from,
            _ => return Err(Error::Domain("cannot infer the ray direction".into())),
        }
    };
    let mut check = Check::new("finite ray");
    for w in coords.windows(2) {
        check.expect((w[1] > w[0]) == toward_hi, || "samples are not monotone along the final arc".into());
    }
    let spines: Vec<PointSet> =
        samples.iter().map(|&y| geodesic_spine(t, base, y).map(|s| s.set)).collect::<Result<_>>()?;
    for (k, w) in spines.windows(2).enumerate() {
        check.expect(w[0].is_subset(&w[1]), || format!("spine {k} is not contained in spine {}", k + 1));
    }
    let a = &t.arcs[arc];
    let end = if toward_hi { a.to } else { a.from };
    let end_c = a.coord_of(end);
    let endpoints = if t.is_real(end) {
        vec![end]
    } else {
        let l = t.limits_of(end);
        if l.is_empty() {
            return Ok(RayOutcome::EscapesTruncation { open_end: end });
        }
        l
    };
    let mut tail = spines.last().unwrap().clone();
    let (lo, hi) = if toward_hi { (c_last, end_c) } else { (end_c, c_last) };
    tail.add_span(arc, Span { lo, hi, lo_closed: false, hi_closed: false });
    for &e in &endpoints {
        let gs = geodesic_spine(t, base, Point::Node(e))?.set.remove_point(Point::Node(e));
        check.expect(gs.is_subset(&tail) && spines.last().unwrap().is_subset(&gs), || {
            format!("ρ ≠ GS({}, {}) − {{{}}}", t.nodes[e].label, t.format_point(base), t.nodes[e].label)
        });
    }
    Ok(RayOutcome::Endpoints { non_separable: endpoints.len() > 1, endpoints, check })
}
