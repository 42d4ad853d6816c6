use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::context::BuildContext;
use super::stage::{LabeledTree, TreePoint};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::group_order::Tag;
use crate::order_tree::{ArcId, NodeKind, Point, TreeGraph};
use crate::report::Check;

/// `T_n` as a graph: one node per breakpoint (integers, interval ends,
/// gluing points, after identification), arcs in between.
#[derive(Debug, Clone, Serialize)]
pub struct OrderTree {
    pub graph: TreeGraph,
    /// `ν_n` as points of `graph`.
    pub points: BTreeMap<usize, Point>,
    /// `(interval, j) → forward` for every unit segment `[j, j+1]`.
    pub orientation: BTreeMap<(usize, i64), bool>,
    pub arcs_of_unit: BTreeMap<(usize, i64), Vec<ArcId>>,
}

impl OrderTree {
    /// Labels of `G⁺` sitting at `p`.
    pub fn labels_at(&self, p: Point) -> Vec<usize> {
        self.points.iter().filter(|(_, &q)| q == p).map(|(&a, _)| a).collect()
    }
}

fn find(parent: &mut BTreeMap<TreePoint, TreePoint>, p: TreePoint) -> TreePoint {
    let q = *parent.entry(p).or_insert(p);
    if q == p {
        return p;
    }
    let r = find(parent, q);
    parent.insert(p, r);
    r
}

fn units(lo: Dyadic, hi: Dyadic) -> impl Iterator<Item = i64> {
    let first = lo.floor();
    let last = if hi.is_integer() { hi.floor() - 1 } else { hi.floor() };
    (first..=last).filter(move |&j| Dyadic::int(j + 1) > lo)
}

/// The quotient graph with a given orientation per unit segment.
pub fn to_graph(ctx: &BuildContext, state: &LabeledTree, orientation: &BTreeMap<(usize, i64), bool>) -> OrderTree {
    let mut breaks: Vec<BTreeSet<Dyadic>> = state
        .intervals
        .iter()
        .map(|iv| {
            let mut s: BTreeSet<Dyadic> = [iv.lo, iv.hi].into();
            s.extend(units(iv.lo, iv.hi).map(|j| Dyadic::int(j)).filter(|&c| c > iv.lo));
            s
        })
        .collect();
    for g in &state.gluings {
        breaks[g.onto.interval].insert(g.onto.at);
    }
    let mut parent = BTreeMap::new();
    for g in &state.gluings {
        let a = find(&mut parent, TreePoint { interval: g.interval, at: state.intervals[g.interval].lo });
        let b = find(&mut parent, g.onto);
        parent.insert(a, b);
    }
    let mut graph = TreeGraph::new();
    let mut node_of: BTreeMap<TreePoint, usize> = BTreeMap::new();
    let mut node_names: Vec<Vec<String>> = Vec::new();
    for (i, bs) in breaks.iter().enumerate() {
        for &c in bs {
            let root = find(&mut parent, TreePoint { interval: i, at: c });
            if !node_of.contains_key(&root) {
                node_of.insert(root, graph.add_node("", NodeKind::Real));
                node_names.push(Vec::new());
            }
        }
    }
    let mut node = |p: TreePoint| node_of[&find(&mut parent, p)];
    let mut arcs_of_unit: BTreeMap<(usize, i64), Vec<ArcId>> = BTreeMap::new();
    let mut arc_at: BTreeMap<(usize, Dyadic), ArcId> = BTreeMap::new();
    for (i, bs) in breaks.iter().enumerate() {
        let cs: Vec<Dyadic> = bs.iter().copied().collect();
        for w in cs.windows(2) {
            let j = w[0].floor();
            let forward = orientation.get(&(i, j)).copied().unwrap_or(true);
            let a = graph.add_arc(node(TreePoint { interval: i, at: w[0] }), node(TreePoint { interval: i, at: w[1] }), w[0], w[1], forward);
            graph.arcs[a].label = format!("I{i}[{}, {}]", w[0], w[1]);
            arcs_of_unit.entry((i, j)).or_default().push(a);
            arc_at.insert((i, w[0]), a);
        }
    }
    let mut points = BTreeMap::new();
    for (&a, &tp) in &state.nu {
        let p = if breaks[tp.interval].contains(&tp.at) {
            let n = node(tp);
            node_names[n].push(ctx.plus_label(a).to_string());
            Point::Node(n)
        } else {
            let (_, &arc) = arc_at.range(..(tp.interval, tp.at)).next_back().expect("inside an arc");
            Point::Arc(arc, tp.at)
        };
        points.insert(a, p);
    }
    for (n, names) in node_names.into_iter().enumerate() {
        graph.nodes[n].label = if names.is_empty() { format!("p{n}") } else { names.join("=") };
    }
    OrderTree { graph, points, orientation: orientation.clone(), arcs_of_unit }
}

/// Orients each unit segment `σ`: positive from `j` to `j+1` iff `g_-`
/// lies in `[j, ν(g))` for an interior label `g`. The check records
/// whether every interior label gives the same answer.
pub fn orient_segments(ctx: &BuildContext, state: &LabeledTree) -> Result<(OrderTree, Check)> {
    let mut votes: BTreeMap<(usize, i64), Vec<(usize, bool)>> = BTreeMap::new();
    for &g in &state.members {
        let tp = state.nu[&ctx.aug(g, Tag::Plain)];
        if tp.at.is_integer() {
            return Err(Error::Invariant(format!("{} labels an integer point", ctx.base().label(g))));
        }
        let minus = state.nu[&ctx.aug(g, Tag::Minus)];
        if minus.interval != tp.interval {
            return Err(Error::Invariant(format!("{} and its g_- lie on different intervals", ctx.base().label(g))));
        }
        votes.entry((tp.interval, tp.at.floor())).or_default().push((g, minus.at < tp.at));
    }
    let mut check = Check::new("orientation independent of the interior label");
    let mut orientation = BTreeMap::new();
    for (i, iv) in state.intervals.iter().enumerate() {
        for j in units(iv.lo, iv.hi) {
            let Some(vs) = votes.get(&(i, j)) else {
                return Err(Error::Invariant(format!("unit segment {j} of I{i} has no interior group label")));
            };
            let first = vs[0].1;
            for &(g, v) in vs {
                check.expect(v == first, || format!("I{i}[{j}, {}]: {} disagrees", j + 1, ctx.base().label(g)));
            }
            orientation.insert((i, j), first);
        }
    }
    Ok((to_graph(ctx, state, &orientation), check))
}
