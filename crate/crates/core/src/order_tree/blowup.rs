use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::axioms::check_order_tree_axioms;
use super::graph::{ArcId, NodeId, NodeKind, Point, PointClass, TreeGraph};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// A ray of the partially blown-up tree, named by the arc it starts along.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RayKey {
    Arc(ArcId),
    Linear(NodeId),
    Stub(NodeId),
}

/// Where a node of the blow-up comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeOrigin {
    Original(NodeId),
    /// One end of the arc replacing a general branch point; `arcs` are the
    /// original arcs attached there.
    LinearSide { node: NodeId, arcs: Vec<ArcId> },
    /// The endpoint created for a non-distinguished ray.
    Split { base: Box<NodeOrigin>, ray: RayKey },
    /// The open end left on a distinguished ray.
    OpenEnd(Box<NodeOrigin>),
    /// The far (open) end of a stub at a sink or source.
    StubEnd(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ArcOrigin {
    Original(ArcId),
    Linear(NodeId),
    Stub(NodeId),
}

/// The blow-up `T′` with provenance for every node and arc; `φ` and the
/// core are derived from it.
#[derive(Debug, Clone, Serialize)]
pub struct OneManifold {
    pub graph: TreeGraph,
    pub node_origin: Vec<NodeOrigin>,
    pub arc_origin: Vec<ArcOrigin>,
}

fn base_node(o: &NodeOrigin) -> Option<NodeId> {
    match o {
        NodeOrigin::Original(x) | NodeOrigin::LinearSide { node: x, .. } => Some(*x),
        NodeOrigin::Split { base, .. } => base_node(base),
        NodeOrigin::OpenEnd(_) | NodeOrigin::StubEnd(_) => None,
    }
}

impl OneManifold {
    /// The collapse map `φ : T′ → T` (defined on points of `T′`).
    pub fn phi(&self, p: Point) -> Point {
        match p {
            Point::Node(n) => match &self.node_origin[n] {
                NodeOrigin::Original(x) => Point::Node(*x),
                o => Point::Node(base_node(o).expect("real nodes have a base")),
            },
            Point::Arc(a, c) => match self.arc_origin[a] {
                ArcOrigin::Original(b) => Point::Arc(b, c),
                ArcOrigin::Linear(x) | ArcOrigin::Stub(x) => Point::Node(x),
            },
        }
    }

    /// Points outside the open stubs added at sinks and sources.
    pub fn in_core(&self, p: Point) -> bool {
        !matches!(p, Point::Arc(a, _) if matches!(self.arc_origin[a], ArcOrigin::Stub(_)))
    }

    pub fn node_of(&self, o: &NodeOrigin) -> Option<NodeId> {
        self.node_origin.iter().position(|x| x == o)
    }

    pub fn arc_of(&self, o: ArcOrigin) -> Option<ArcId> {
        self.arc_origin.iter().position(|&x| x == o)
    }
}

fn ray_label(t: &TreeGraph, r: &RayKey) -> String {
    match r {
        RayKey::Arc(a) if !t.arcs[*a].label.is_empty() => t.arcs[*a].label.clone(),
        RayKey::Arc(a) => format!("a{a}"),
        RayKey::Linear(_) => "lin".into(),
        RayKey::Stub(_) => "stub".into(),
    }
}

fn origin_label(t: &TreeGraph, o: &NodeOrigin) -> String {
    match o {
        NodeOrigin::Original(x) => t.nodes[*x].label.clone(),
        NodeOrigin::LinearSide { node, arcs } => {
            let incoming = arcs.first().is_some_and(|&a| {
                let arc = &t.arcs[a];
                (arc.to == *node) == arc.forward
            });
            format!("{}_{}", t.nodes[*node].label, if incoming { "in" } else { "out" })
        }
        NodeOrigin::Split { base, ray } => format!("{}|{}", origin_label(t, base), ray_label(t, ray)),
        NodeOrigin::OpenEnd(b) => format!("J({})", origin_label(t, b)),
        NodeOrigin::StubEnd(x) => format!("∞({})", t.nodes[*x].label),
    }
}

/// Linear blow-up of general branch points, stubs at sinks and sources,
/// then each branch point with a distinguished ray is split into one
/// endpoint per other ray, the distinguished ray left open.
///
/// Open ends without limits are allowed in the input (they behave as open
/// rays); cusps are not.
pub fn denjoy_blowup(t: &TreeGraph) -> Result<OneManifold> {
    let axioms = check_order_tree_axioms(t);
    if let Some(c) = axioms.first_failure() {
        return Err(Error::Precondition(format!("input is not an order tree: {}", c.name)));
    }
    if !t.limits.is_empty() {
        return Err(Error::Precondition("blow-up input must not contain cusps".into()));
    }
    // Vertices of the intermediate tree T0 with their rays (true = out).
    let mut vertices: Vec<(NodeOrigin, Vec<(RayKey, bool)>)> = Vec::new();
    // (original node, original arc) -> vertex index
    let mut arc_vertex: HashMap<(NodeId, ArcId), usize> = HashMap::new();
    let mut extra_arcs: Vec<(ArcOrigin, usize, usize)> = Vec::new(); // linear arcs: in-vertex, out-vertex
    let mut stubs: Vec<(NodeId, usize, bool)> = Vec::new(); // node, vertex, forward
    for x in 0..t.nodes.len() {
        if !t.is_real(x) {
            continue;
        }
        let rays: Vec<(RayKey, bool)> = t
            .rays_at(x)
            .into_iter()
            .map(|(r, out)| match r {
                super::graph::RayStart::Arc(a) => (RayKey::Arc(a), out),
                super::graph::RayStart::Link(_) => unreachable!("no limits"),
            })
            .collect();
        let deg = t.degrees(Point::Node(x))?;
        match deg.class {
            PointClass::GeneralBranch => {
                let arcs_with = |dir: bool| -> Vec<ArcId> {
                    rays.iter()
                        .filter(|r| r.1 == dir)
                        .map(|r| match r.0 {
                            RayKey::Arc(a) => a,
                            _ => unreachable!(),
                        })
                        .collect()
                };
                let (ins, outs) = (arcs_with(false), arcs_with(true));
                let vin = vertices.len();
                let mut rin: Vec<(RayKey, bool)> = ins.iter().map(|&a| (RayKey::Arc(a), false)).collect();
                rin.push((RayKey::Linear(x), true));
                vertices.push((NodeOrigin::LinearSide { node: x, arcs: ins.clone() }, rin));
                let mut rout: Vec<(RayKey, bool)> = outs.iter().map(|&a| (RayKey::Arc(a), true)).collect();
                rout.push((RayKey::Linear(x), false));
                vertices.push((NodeOrigin::LinearSide { node: x, arcs: outs.clone() }, rout));
                for a in ins {
                    arc_vertex.insert((x, a), vin);
                }
                for a in outs {
                    arc_vertex.insert((x, a), vin + 1);
                }
                extra_arcs.push((ArcOrigin::Linear(x), vin, vin + 1));
            }
            PointClass::Sink | PointClass::Source => {
                let is_sink = deg.class == PointClass::Sink;
                let v = vertices.len();
                let mut r = rays.clone();
                r.push((RayKey::Stub(x), is_sink));
                for (k, _) in &rays {
                    if let RayKey::Arc(a) = k {
                        arc_vertex.insert((x, *a), v);
                    }
                }
                vertices.push((NodeOrigin::Original(x), r));
                stubs.push((x, v, !is_sink));
            }
            _ => {
                let v = vertices.len();
                for (k, _) in &rays {
                    if let RayKey::Arc(a) = k {
                        arc_vertex.insert((x, *a), v);
                    }
                }
                vertices.push((NodeOrigin::Original(x), rays));
            }
        }
    }

    let mut m = TreeGraph::new();
    let mut node_origin: Vec<NodeOrigin> = Vec::new();
    let mut add = |m: &mut TreeGraph, o: NodeOrigin, kind: NodeKind| -> NodeId {
        let id = m.add_node(origin_label(t, &o), kind);
        node_origin.push(o);
        id
    };
    // Original open ends stay open ends.
    let mut open_ends: HashMap<NodeId, NodeId> = HashMap::new();
    for x in 0..t.nodes.len() {
        if !t.is_real(x) {
            open_ends.insert(x, add(&mut m, NodeOrigin::Original(x), NodeKind::OpenEnd));
        }
    }
    // vertex, ray -> node of T′ where that ray's arc attaches
    let mut attach: HashMap<(usize, RayKey), NodeId> = HashMap::new();
    let mut pending_limits: Vec<(NodeId, NodeId)> = Vec::new();
    for (vi, (origin, rays)) in vertices.iter().enumerate() {
        let n_o = rays.iter().filter(|r| r.1).count();
        let n_f = rays.len() - n_o;
        let distinguished = match (n_o, n_f) {
            (1, f) if f > 1 => rays.iter().find(|r| r.1),
            (o, 1) if o > 1 => rays.iter().find(|r| !r.1),
            _ => None,
        };
        match distinguished {
            None => {
                let id = add(&mut m, origin.clone(), NodeKind::Real);
                for (k, _) in rays {
                    attach.insert((vi, k.clone()), id);
                }
            }
            Some((dk, _)) => {
                let j = add(&mut m, NodeOrigin::OpenEnd(Box::new(origin.clone())), NodeKind::OpenEnd);
                attach.insert((vi, dk.clone()), j);
                for (k, _) in rays.iter().filter(|r| &r.0 != dk) {
                    let s = add(&mut m, NodeOrigin::Split { base: Box::new(origin.clone()), ray: k.clone() }, NodeKind::Real);
                    attach.insert((vi, k.clone()), s);
                    pending_limits.push((j, s));
                }
            }
        }
    }
    let mut arc_origin = Vec::new();
    for (i, a) in t.arcs.iter().enumerate() {
        let end = |x: NodeId| -> NodeId {
            match open_ends.get(&x) {
                Some(&j) => j,
                None => attach[&(arc_vertex[&(x, i)], RayKey::Arc(i))],
            }
        };
        let id = m.add_arc(end(a.from), end(a.to), a.lo, a.hi, a.forward);
        m.arcs[id].label = a.label.clone();
        arc_origin.push(ArcOrigin::Original(i));
    }
    for &(o, vin, vout) in &extra_arcs {
        let ArcOrigin::Linear(x) = o else { unreachable!() };
        let from = attach[&(vin, RayKey::Linear(x))];
        let to = attach[&(vout, RayKey::Linear(x))];
        let id = m.add_arc(from, to, Dyadic::ZERO, Dyadic::ONE, true);
        m.arcs[id].label = format!("lin({})", t.nodes[x].label);
        arc_origin.push(o);
    }
    for &(x, v, forward) in &stubs {
        let far = add(&mut m, NodeOrigin::StubEnd(x), NodeKind::OpenEnd);
        let near = attach[&(v, RayKey::Stub(x))];
        let id = m.add_arc(far, near, Dyadic::ZERO, Dyadic::ONE, forward);
        m.arcs[id].label = format!("stub({})", t.nodes[x].label);
        arc_origin.push(ArcOrigin::Stub(x));
    }
    for (j, s) in pending_limits {
        m.add_limit(j, s);
    }
    Ok(OneManifold { graph: m, node_origin, arc_origin })
}

/// A structural fingerprint, independent of construction order: arcs as
/// endpoint origins with the positive head, and limit links.
pub fn signature(m: &OneManifold) -> BTreeSet<String> {
    let key = |n: NodeId| format!("{:?}", m.node_origin[n]);
    let mut s = BTreeSet::new();
    for (a, o) in m.graph.arcs.iter().zip(&m.arc_origin) {
        let (tail, head) = if a.forward { (a.from, a.to) } else { (a.to, a.from) };
        s.insert(format!("arc {o:?}: {} -> {}", key(tail), key(head)));
    }
    for l in &m.graph.limits {
        s.insert(format!("limit {} ~ {}", key(l.open_end), key(l.node)));
    }
    s
}

fn reversed_signature(m: &OneManifold) -> BTreeSet<String> {
    let rev = OneManifold { graph: m.graph.reversed(), ..m.clone() };
    signature(&rev)
}

/// Branchless, `φ(core) = T`, collapse reproduces the arcs, and reversal
/// commutes with the blow-up.
pub fn check_blowup(t: &TreeGraph, m: &OneManifold) -> Report {
    let mut r = Report::new("Denjoy blow-up");
    for c in check_order_tree_axioms(&m.graph).checks {
        r.push(c);
    }
    let g = &m.graph;
    let mut branchless = Check::new("branchless (n_o ≤ 1, n_f ≤ 1)");
    for n in 0..g.nodes.len() {
        if g.is_real(n) {
            let d = g.degrees(Point::Node(n)).expect("real node");
            branchless.expect(d.n_o <= 1 && d.n_f <= 1, || format!("{} has (n_o, n_f) = ({}, {})", g.nodes[n].label, d.n_o, d.n_f));
        }
    }
    r.push(branchless);

    let mut surj = Check::new("φ(core) = T");
    let hit_nodes: BTreeSet<NodeId> = (0..g.nodes.len())
        .filter(|&n| g.is_real(n))
        .filter_map(|n| match m.phi(Point::Node(n)) {
            Point::Node(x) => Some(x),
            _ => None,
        })
        .collect();
    for x in 0..t.nodes.len() {
        if t.is_real(x) {
            surj.expect(hit_nodes.contains(&x), || format!("{} has no preimage", t.nodes[x].label));
        }
    }
    for a in 0..t.arcs.len() {
        surj.expect(m.arc_of(ArcOrigin::Original(a)).is_some(), || format!("arc {a} has no preimage"));
    }
    for (i, o) in m.arc_origin.iter().enumerate() {
        if let ArcOrigin::Stub(_) = o {
            let a = &g.arcs[i];
            let mid = Point::Arc(i, a.lo.midpoint(a.hi));
            surj.expect(!m.in_core(mid), || "stub interior counted as core".into());
        }
    }
    r.push(surj);

    let mut collapse = Check::new("collapse reproduces arcs");
    let phi_node = |n: NodeId| -> Option<NodeId> {
        if g.is_real(n) {
            base_node(&m.node_origin[n])
        } else {
            match &m.node_origin[n] {
                NodeOrigin::Original(x) => Some(*x),
                NodeOrigin::OpenEnd(b) => base_node(b),
                _ => None,
            }
        }
    };
    let mut seen: BTreeMap<ArcId, usize> = BTreeMap::new();
    for (i, o) in m.arc_origin.iter().enumerate() {
        let a = &g.arcs[i];
        match *o {
            ArcOrigin::Original(b) => {
                *seen.entry(b).or_default() += 1;
                let src = &t.arcs[b];
                collapse.expect(
                    phi_node(a.from) == Some(src.from)
                        && phi_node(a.to) == Some(src.to)
                        && (a.lo, a.hi, a.forward) == (src.lo, src.hi, src.forward),
                    || format!("arc {b} is not reproduced"),
                );
            }
            ArcOrigin::Linear(x) => {
                collapse.expect(phi_node(a.from) == Some(x) && phi_node(a.to) == Some(x), || format!("linear arc at {x} spans two nodes"));
            }
            ArcOrigin::Stub(x) => {
                // Stubs run from their open far end; the near end may itself be
                // an open end when the stub is a distinguished ray.
                collapse.expect(phi_node(a.to) == Some(x), || format!("stub at {x} is misattached"));
            }
        }
    }
    for b in 0..t.arcs.len() {
        collapse.expect(seen.get(&b) == Some(&1), || format!("arc {b} appears {:?} times", seen.get(&b)));
    }
    r.push(collapse);

    let mut rev = Check::new("reversal commutes with blow-up");
    match denjoy_blowup(&t.reversed()) {
        Ok(mr) => rev.expect(signature(&mr) == reversed_signature(m), || "signatures differ".into()),
        Err(e) => rev.fail(|| e.to_string()),
    }
    r.push(rev);
    r
}

/// A partial map of a tree to itself (nodes and arcs, `None` where the
/// image leaves the truncation). Arc coordinates map affinely, endpoint to
/// endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeMap {
    pub name: String,
    pub nodes: Vec<Option<NodeId>>,
    pub arcs: Vec<Option<ArcId>>,
}

/// Whether the image of arc `a` runs `from → from` (`Some(false)`) or
/// `from → to` reversed (`Some(true)`).
fn arc_flip(t: &TreeGraph, f: &TreeMap, a: ArcId) -> Option<bool> {
    let b = f.arcs[a]?;
    let (src, dst) = (&t.arcs[a], &t.arcs[b]);
    match (f.nodes[src.from], f.nodes[src.to]) {
        (Some(x), Some(y)) if x == dst.from && y == dst.to => Some(false),
        (Some(x), Some(y)) if x == dst.to && y == dst.from => Some(true),
        _ => None,
    }
}

/// Image of a point, when it stays inside the truncation. Arcs of equal
/// length only.
pub fn apply_point(t: &TreeGraph, f: &TreeMap, p: Point) -> Option<Point> {
    match p {
        Point::Node(n) => f.nodes[n].map(Point::Node),
        Point::Arc(a, c) => {
            let b = f.arcs[a]?;
            let (src, dst) = (&t.arcs[a], &t.arcs[b]);
            if src.hi - src.lo != dst.hi - dst.lo {
                return None;
            }
            let c2 = if arc_flip(t, f, a)? { dst.hi - (c - src.lo) } else { dst.lo + (c - src.lo) };
            Some(Point::Arc(b, c2))
        }
    }
}

/// The map sends arcs onto arcs compatibly with their endpoints and keeps
/// every orientation.
pub fn check_orientation_preserving(t: &TreeGraph, f: &TreeMap) -> Check {
    let mut c = Check::new(format!("{} preserves orientation", f.name));
    for a in 0..t.arcs.len() {
        let Some(b) = f.arcs[a] else {
            c.skipped += 1;
            continue;
        };
        match arc_flip(t, f, a) {
            None => c.fail(|| format!("arc {a} does not map onto arc {b} endpoint-to-endpoint")),
            // A flipped arc must land on an arc of opposite coordinate
            // orientation.
            Some(flip) => c.expect((t.arcs[b].forward == t.arcs[a].forward) != flip, || {
                format!("arc {} reverses orientation onto {}", t.arcs[a].label, t.arcs[b].label)
            }),
        }
    }
    c
}

fn map_origin(f: &TreeMap, o: &NodeOrigin) -> Option<NodeOrigin> {
    Some(match o {
        NodeOrigin::Original(x) => NodeOrigin::Original(f.nodes[*x]?),
        NodeOrigin::LinearSide { node, arcs } => {
            let mut a: Vec<ArcId> = arcs.iter().map(|&a| f.arcs[a]).collect::<Option<_>>()?;
            a.sort();
            NodeOrigin::LinearSide { node: f.nodes[*node]?, arcs: a }
        }
        NodeOrigin::Split { base, ray } => NodeOrigin::Split {
            base: Box::new(map_origin(f, base)?),
            ray: match ray {
                RayKey::Arc(a) => RayKey::Arc(f.arcs[*a]?),
                RayKey::Linear(x) => RayKey::Linear(f.nodes[*x]?),
                RayKey::Stub(x) => RayKey::Stub(f.nodes[*x]?),
            },
        },
        NodeOrigin::OpenEnd(b) => NodeOrigin::OpenEnd(Box::new(map_origin(f, b)?)),
        NodeOrigin::StubEnd(x) => NodeOrigin::StubEnd(f.nodes[*x]?),
    })
}

/// Transports a map of `T` to `T′` through provenance. Nodes or arcs whose
/// image leaves the truncation (or whose image has a different local
/// shape, e.g. near the truncation boundary) map to `None`.
pub fn lift_map(m: &OneManifold, f: &TreeMap) -> TreeMap {
    let index: HashMap<&NodeOrigin, NodeId> = m.node_origin.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let nodes: Vec<Option<NodeId>> =
        m.node_origin.iter().map(|o| map_origin(f, o).and_then(|o2| index.get(&o2).copied())).collect();
    let arcs: Vec<Option<ArcId>> = m
        .arc_origin
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let o2 = match *o {
                ArcOrigin::Original(a) => ArcOrigin::Original(f.arcs[a]?),
                ArcOrigin::Linear(x) => ArcOrigin::Linear(f.nodes[x]?),
                ArcOrigin::Stub(x) => ArcOrigin::Stub(f.nodes[x]?),
            };
            let b = m.arc_of(o2)?;
            let (src, dst) = (&m.graph.arcs[i], &m.graph.arcs[b]);
            // Only arcs whose endpoints lift too.
            let ends = (nodes[src.from], nodes[src.to]);
            (ends == (Some(dst.from), Some(dst.to)) || ends == (Some(dst.to), Some(dst.from))).then_some(b)
        })
        .collect();
    TreeMap { name: format!("{} on T′", f.name), nodes, arcs }
}
