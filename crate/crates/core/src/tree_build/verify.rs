use std::collections::{BTreeMap, BTreeSet};

use super::context::BuildContext;
use super::orient::OrderTree;
use super::stage::LabeledTree;
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::group_order::Tag;
use crate::order_tree::{check_order_tree_axioms, Move, Point, TreeGraph};
use crate::report::{Check, Report};

/// Distance from `x` along the walk to `y` of every point of `points` lying
/// on it.
pub(crate) fn path_positions(g: &TreeGraph, x: Point, y: Point, points: &BTreeMap<usize, Point>) -> Result<BTreeMap<usize, Dyadic>> {
    let moves = g.walk(x, y)?;
    let mut out = BTreeMap::new();
    let mut start = Dyadic::ZERO;
    let mut spans = Vec::new();
    for m in &moves {
        if let Move::Along { arc, from, to } = *m {
            spans.push((arc, from, to, start));
            start = start + if to > from { to - from } else { from - to };
        }
    }
    for (&label, &p) in points {
        let pos = match p {
            _ if p == x => Some(Dyadic::ZERO),
            _ if p == y => Some(start),
            Point::Arc(a, c) => spans.iter().find_map(|&(arc, from, to, s)| {
                let (lo, hi) = if from < to { (from, to) } else { (to, from) };
                (arc == a && lo <= c && c <= hi).then(|| s + if to > from { c - from } else { from - c })
            }),
            Point::Node(n) => spans.iter().find_map(|&(arc, from, to, s)| {
                let a = &g.arcs[arc];
                let end = |c: Dyadic| if c == a.lo { Some(a.from) } else if c == a.hi { Some(a.to) } else { None };
                if end(from) == Some(n) {
                    Some(s)
                } else if end(to) == Some(n) {
                    Some(s + if to > from { to - from } else { from - to })
                } else {
                    None
                }
            }),
        };
        if let Some(d) = pos {
            out.insert(label, d);
        }
    }
    Ok(out)
}

/// The four stage properties, `ν` injective on `G_n`, and closure of
/// `G_n` under betweenness.
pub fn verify_stage_properties(ctx: &BuildContext, state: &LabeledTree, tree: &OrderTree) -> Report {
    let mut r = Report::new(format!("stage {}", state.stage));
    let g = &tree.graph;
    let mut p1 = Check::new("(1) T_n is a tree");
    for c in check_order_tree_axioms(g).checks {
        p1.examined += c.examined;
        for w in c.witnesses.iter().take(3) {
            p1.fail(|| format!("{}: {w}", c.name));
        }
        if !c.passed() && c.witnesses.is_empty() {
            p1.fail(|| c.name.clone());
        }
    }
    p1.expect(g.nodes.len() == g.arcs.len() + 1, || format!("{} nodes, {} arcs", g.nodes.len(), g.arcs.len()));
    r.push(p1);
    r.push(check_gaps(ctx, state, tree));
    r.push(check_intervals(ctx, state, tree));

    let mut p4 = Check::new("(4) ν(x) = ν(y) ⟺ x R y");
    let labelled: Vec<usize> = tree.points.keys().copied().collect();
    for (i, &a) in labelled.iter().enumerate() {
        for &b in &labelled[i + 1..] {
            let same = tree.points[&a] == tree.points[&b];
            p4.expect(same == ctx.r_equiv(a, b), || {
                format!("{} and {}: same point {same}, R {}", ctx.plus_label(a), ctx.plus_label(b), !same)
            });
        }
    }
    r.push(p4);

    let mut inj = Check::new("ν injective on G_n");
    let mut seen: BTreeMap<Point, usize> = BTreeMap::new();
    for &h in &state.members {
        let p = tree.points[&ctx.aug(h, Tag::Plain)];
        let prev = seen.get(&p).copied();
        inj.expect(prev.is_none(), || format!("{} and {} share a point", ctx.base().label(prev.unwrap_or(h)), ctx.base().label(h)));
        seen.insert(p, h);
    }
    r.push(inj);

    let mut closed = Check::new("B_{a,b} ⊂ G_n for a, b ∈ G_n");
    let members: BTreeSet<usize> = state.members.iter().copied().collect();
    for &a in &members {
        for &b in &members {
            if a < b {
                let missing: Vec<usize> = ctx.between_bits(a, b).ones().filter(|x| !members.contains(x)).collect();
                closed.expect(missing.is_empty(), || format!("B_({}, {}) leaves G_n", ctx.base().label(a), ctx.base().label(b)));
            }
        }
    }
    r.push(closed);
    r
}

/// Gaps between consecutive labelled points along each arc must be
/// `(ν(g), ν(g_±))`.
fn check_gaps(ctx: &BuildContext, state: &LabeledTree, tree: &OrderTree) -> Check {
    let g = &tree.graph;
    let mut c = Check::new("(2) gaps are (ν(g), ν(g_±))");
    let mut at_point: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (&a, &p) in &tree.points {
        at_point.entry(p).or_default().push(a);
    }
    let _ = state;
    for (ai, arc) in g.arcs.iter().enumerate() {
        let mut stops: Vec<(Dyadic, Point)> = vec![(arc.lo, Point::Node(arc.from)), (arc.hi, Point::Node(arc.to))];
        stops.extend(at_point.keys().filter_map(|&p| match p {
            Point::Arc(x, cc) if x == ai => Some((cc, p)),
            _ => None,
        }));
        stops.sort();
        for w in stops.windows(2) {
            let (Some(l), Some(rr)) = (at_point.get(&w[0].1), at_point.get(&w[1].1)) else {
                c.fail(|| format!("unlabelled end of a gap on {}", arc.label));
                continue;
            };
            let ok = |p: &[usize], q: &[usize]| {
                p.iter().filter(|&&a| !ctx.gp.is_tagged(a)).any(|&a| {
                    let h = a / 3;
                    q.contains(&ctx.aug(h, Tag::Minus)) || q.contains(&ctx.aug(h, Tag::Plus))
                })
            };
            c.expect(ok(l, rr) || ok(rr, l), || format!("gap ({}, {}) on {}", w[0].0, w[1].0, arc.label));
        }
    }
    c
}

/// Labels along `[ν(a), ν(b)]` are `B_{a,b} ⊂ G_n⁺` in `⪯` order; other
/// tagged labels on the path satisfy the `R`-clauses.
fn check_intervals(ctx: &BuildContext, state: &LabeledTree, tree: &OrderTree) -> Check {
    let mut c = Check::new("(3) [ν(a), ν(b)] realizes B_{a,b}");
    let ms = &state.members;
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            let (pa, pb) = (ctx.aug(a, Tag::Plain), ctx.aug(b, Tag::Plain));
            let on_path = match path_positions(&tree.graph, tree.points[&pa], tree.points[&pb], &tree.points) {
                Ok(x) => x,
                Err(e) => {
                    c.fail(|| e.to_string());
                    continue;
                }
            };
            let bab: Vec<usize> = ctx.plus_between(pa, pb).ones().collect();
            let name = || format!("({}, {})", ctx.base().label(a), ctx.base().label(b));
            // Every member is labelled on the path, in ⪯ order.
            let mut ranked: Vec<(usize, usize)> = bab
                .iter()
                .map(|&y| (bab.iter().filter(|&&x| ctx.plus_table.preceq(pa, x, y)).count(), y))
                .collect();
            ranked.sort();
            c.examined += 1;
            let mut last = Dyadic::ZERO;
            for &(_, y) in &ranked {
                match on_path.get(&y) {
                    None => {
                        c.fail(|| format!("{}: {} not on the path", name(), ctx.plus_label(y)));
                    }
                    Some(&d) => {
                        if d < last {
                                c.fail(|| format!("{}: {} out of order", name(), ctx.plus_label(y)));
                        }
                        last = d;
                    }
                }
            }
            for (&l, _) in &on_path {
                if bab.contains(&l) {
                    continue;
                }
                if !ctx.gp.is_tagged(l) {
                    c.fail(|| format!("{}: {} lies on the path", name(), ctx.plus_label(l)));
                    continue;
                }
                let clause = |e: usize| ctx.plus_between(e, l).ones().any(|d| bab.contains(&d) && d != l && ctx.r_equiv(l, d));
                if !(clause(pa) && clause(pb)) {
                    c.fail(|| format!("{}: stray label {}", name(), ctx.plus_label(l)));
                }
            }
        }
    }
    c
}
