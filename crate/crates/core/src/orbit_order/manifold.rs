use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::order_tree::{Point, TreeGraph};
use crate::poset_core::Relation;

fn require_regular(g: &TreeGraph, p: Point) -> Result<()> {
    let d = g.degrees(p)?;
    if d.n_o > 1 || d.n_f > 1 {
        return Err(Error::Domain(format!("{} is a branch point ({})", g.format_point(p), d.class)));
    }
    Ok(())
}

/// Whether `y` lies in `x⁺`, the component of `M − {x}` entered by
/// leaving `x` in the positive direction.
pub fn in_plus(g: &TreeGraph, x: Point, y: Point) -> Result<bool> {
    let w = g.walk(x, y)?;
    let first = w.first().ok_or_else(|| Error::Domain("x = y has no side".into()))?;
    Ok(g.move_positive(first))
}

/// `x < y ⟺ y⁺ ⊊ x⁺`: `y ∈ x⁺` and `x ∉ y⁺`.
pub fn manifold_lt(g: &TreeGraph, x: Point, y: Point) -> Result<bool> {
    Ok(x != y && in_plus(g, x, y)? && !in_plus(g, y, x)?)
}

/// Points covering every component of `M` minus the given points: real
/// nodes and one interior point between consecutive cut coordinates on
/// each arc.
pub fn bound_candidates(g: &TreeGraph, cuts: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = (0..g.nodes.len()).filter(|&n| g.is_real(n)).map(Point::Node).collect();
    for (i, a) in g.arcs.iter().enumerate() {
        let mut cs = vec![a.lo, a.hi];
        cs.extend(cuts.iter().filter_map(|p| match *p {
            Point::Arc(b, c) if b == i => Some(c),
            _ => None,
        }));
        cs.sort();
        cs.dedup();
        out.extend(cs.windows(2).map(|w| Point::Arc(i, w[0].midpoint(w[1]))));
    }
    out.retain(|p| !cuts.contains(p));
    out
}

/// The order on a branchless manifold. Incomparable pairs are tagged by a
/// common upper (`~u`) or lower (`~l`) bound found in `M`; `None` when no
/// bound is realized in the finite structure.
pub fn manifold_order(g: &TreeGraph, x: Point, y: Point) -> Result<Option<Relation>> {
    require_regular(g, x)?;
    require_regular(g, y)?;
    if x == y {
        return Ok(Some(Relation::Eq));
    }
    let (a, b) = (in_plus(g, x, y)?, in_plus(g, y, x)?);
    Ok(match (a, b) {
        (true, false) => Some(Relation::Lt),
        (false, true) => Some(Relation::Gt),
        (facing, _) => {
            let mut found = None;
            for z in bound_candidates(g, &[x, y]) {
                let ok = if facing {
                    manifold_lt(g, x, z)? && manifold_lt(g, y, z)?
                } else {
                    manifold_lt(g, z, x)? && manifold_lt(g, z, y)?
                };
                if ok {
                    found = Some(if facing { Relation::SimU } else { Relation::SimL });
                    break;
                }
            }
            found
        }
    })
}

/// `manifold_order` on all pairs of `points` at once, sharing the bound
/// search. Entry `i * n + j`.
pub fn manifold_order_table(g: &TreeGraph, points: &[Point]) -> Result<Vec<Option<Relation>>> {
    use rayon::prelude::*;
    let n = points.len();
    for &p in points {
        require_regular(g, p)?;
    }
    // plus[i] = points j with j ∈ points[i]⁺.
    let side = |p: Point| -> Result<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(n);
        for (j, &q) in points.iter().enumerate() {
            if p != q && in_plus(g, p, q)? {
                s.insert(j);
            }
        }
        Ok(s)
    };
    let plus: Vec<FixedBitSet> = points.par_iter().map(|&p| side(p)).collect::<Result<_>>()?;
    // For each candidate z: orbit points below it and above it.
    let cands = bound_candidates(g, points);
    let bounds: Vec<(FixedBitSet, FixedBitSet)> = cands
        .par_iter()
        .map(|&z| -> Result<(FixedBitSet, FixedBitSet)> {
            let zp = side(z)?;
            let mut below = FixedBitSet::with_capacity(n);
            let mut above = FixedBitSet::with_capacity(n);
            for (j, &q) in points.iter().enumerate() {
                let z_in_q = in_plus(g, q, z)?;
                if z_in_q && !zp.contains(j) {
                    below.insert(j);
                } else if !z_in_q && zp.contains(j) {
                    above.insert(j);
                }
            }
            Ok((below, above))
        })
        .collect::<Result<_>>()?;
    let mut out = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = if points[i] == points[j] {
                Some(Relation::Eq)
            } else {
                match (plus[i].contains(j), plus[j].contains(i)) {
                    (true, false) => Some(Relation::Lt),
                    (false, true) => Some(Relation::Gt),
                    (true, true) => bounds
                        .iter()
                        .any(|(below, _)| below.contains(i) && below.contains(j))
                        .then_some(Relation::SimU),
                    (false, false) => bounds
                        .iter()
                        .any(|(_, above)| above.contains(i) && above.contains(j))
                        .then_some(Relation::SimL),
                }
            };
        }
    }
    Ok(out)
}
