use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub type NodeId = usize;
pub type ArcId = usize;
pub type LimitId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    /// An ordinary point of the tree.
    Real,
    /// The open end of a single arc; not a point. Its limit links name the
    /// real nodes the arc accumulates on (several ⇒ non-separable).
    OpenEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub label: String,
    pub kind: NodeKind,
}

/// An arc from `from` (at coordinate `lo`) to `to` (at `hi`). When
/// `forward` is set the positive direction is increasing coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub forward: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

impl Arc {
    pub fn coord_of(&self, n: NodeId) -> Dyadic {
        if n == self.from {
            self.lo
        } else {
            self.hi
        }
    }

    pub fn other(&self, n: NodeId) -> NodeId {
        if n == self.from {
            self.to
        } else {
            self.from
        }
    }

    /// Whether moving from coordinate `a` to `b` is positive.
    pub fn positive(&self, a: Dyadic, b: Dyadic) -> bool {
        (b > a) == self.forward
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limit {
    pub open_end: NodeId,
    pub node: NodeId,
}

/// A finite oriented order tree (or non-Hausdorff 1-manifold) as a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeGraph {
    pub nodes: Vec<Node>,
    pub arcs: Vec<Arc>,
    #[serde(default)]
    pub limits: Vec<Limit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Point {
    Node(NodeId),
    /// Strictly inside the arc.
    Arc(ArcId, Dyadic),
}

/// One step of a walk between two points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Move {
    Along { arc: ArcId, from: Dyadic, to: Dyadic },
    /// Between an open end and one of its limit nodes.
    Through { limit: LimitId, into_node: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointClass {
    Regular,
    Sink,
    Source,
    /// Branch point whose single incoming ray is distinguished.
    DistinguishedIn,
    /// Branch point whose single outgoing ray is distinguished.
    DistinguishedOut,
    GeneralBranch,
    Isolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Degrees {
    pub n_o: usize,
    pub n_f: usize,
    pub class: PointClass,
}

/// A ray class at a node, named by what it starts along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RayStart {
    Arc(ArcId),
    Link(LimitId),
}

impl TreeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: impl Into<String>, kind: NodeKind) -> NodeId {
        self.nodes.push(Node { label: label.into(), kind });
        self.nodes.len() - 1
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId, lo: Dyadic, hi: Dyadic, forward: bool) -> ArcId {
        self.arcs.push(Arc { from, to, lo, hi, forward, label: String::new() });
        self.arcs.len() - 1
    }

    pub fn add_limit(&mut self, open_end: NodeId, node: NodeId) -> LimitId {
        self.limits.push(Limit { open_end, node });
        self.limits.len() - 1
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn is_real(&self, n: NodeId) -> bool {
        self.nodes[n].kind == NodeKind::Real
    }

    /// The single arc at an open end.
    pub fn open_end_arc(&self, j: NodeId) -> Option<ArcId> {
        self.arcs.iter().position(|a| a.from == j || a.to == j)
    }

    pub fn limits_of(&self, j: NodeId) -> Vec<NodeId> {
        self.limits.iter().filter(|l| l.open_end == j).map(|l| l.node).collect()
    }

    /// Structural sanity: coordinates, node kinds, open-end shape.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for (i, a) in self.arcs.iter().enumerate() {
            if a.from >= n || a.to >= n {
                return Err(Error::InvalidTree(format!("arc {i} names a missing node")));
            }
            if a.from == a.to {
                return Err(Error::InvalidTree(format!("arc {i} is a loop")));
            }
            if a.lo >= a.hi {
                return Err(Error::InvalidTree(format!("arc {i} has empty coordinate range")));
            }
        }
        for (i, l) in self.limits.iter().enumerate() {
            if l.open_end >= n || l.node >= n {
                return Err(Error::InvalidTree(format!("limit {i} names a missing node")));
            }
            if self.is_real(l.open_end) || !self.is_real(l.node) {
                return Err(Error::InvalidTree(format!("limit {i} must link an open end to a real node")));
            }
        }
        for j in 0..n {
            if self.is_real(j) {
                continue;
            }
            let arcs = self.arcs.iter().filter(|a| a.from == j || a.to == j).count();
            if arcs != 1 {
                return Err(Error::InvalidTree(format!(
                    "open end `{}` must carry exactly one arc (has {arcs})",
                    self.nodes[j].label
                )));
            }
        }
        Ok(())
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        match p {
            Point::Node(n) if n < self.nodes.len() && self.is_real(n) => Ok(()),
            Point::Arc(a, c) if a < self.arcs.len() && self.arcs[a].lo < c && c < self.arcs[a].hi => Ok(()),
            _ => Err(Error::Domain(format!("{p:?} is not a point of the tree"))),
        }
    }

    /// Normalizes a coordinate on an arc to a point (endpoints become
    /// nodes).
    pub fn point_on(&self, arc: ArcId, c: Dyadic) -> Point {
        let a = &self.arcs[arc];
        if c == a.lo {
            Point::Node(a.from)
        } else if c == a.hi {
            Point::Node(a.to)
        } else {
            Point::Arc(arc, c)
        }
    }

    pub fn format_point(&self, p: Point) -> String {
        match p {
            Point::Node(n) => self.nodes[n].label.clone(),
            Point::Arc(a, c) => {
                let arc = &self.arcs[a];
                if arc.label.is_empty() {
                    format!("{}→{}@{c}", self.nodes[arc.from].label, self.nodes[arc.to].label)
                } else {
                    format!("{}@{c}", arc.label)
                }
            }
        }
    }

    /// Whether moving from an open end to its limit node along `limit` is
    /// positive (the move continues the arc towards the open end).
    pub fn through_positive(&self, limit: LimitId, into_node: bool) -> bool {
        let j = self.limits[limit].open_end;
        let a = &self.arcs[self.open_end_arc(j).expect("validated open end")];
        let toward_j = if j == a.to { a.forward } else { !a.forward };
        toward_j == into_node
    }

    pub fn move_positive(&self, m: &Move) -> bool {
        match *m {
            Move::Along { arc, from, to } => self.arcs[arc].positive(from, to),
            Move::Through { limit, into_node } => self.through_positive(limit, into_node),
        }
    }

    /// Ray classes at a real node with their direction (`true` =
    /// outgoing).
    pub fn rays_at(&self, n: NodeId) -> Vec<(RayStart, bool)> {
        let mut out = Vec::new();
        for (i, a) in self.arcs.iter().enumerate() {
            if a.from == n {
                out.push((RayStart::Arc(i), a.forward));
            } else if a.to == n {
                out.push((RayStart::Arc(i), !a.forward));
            }
        }
        for (i, l) in self.limits.iter().enumerate() {
            if l.node == n {
                out.push((RayStart::Link(i), !self.through_positive(i, true)));
            }
        }
        out
    }

    pub fn degrees(&self, p: Point) -> Result<Degrees> {
        self.check_point(p)?;
        let (n_o, n_f) = match p {
            Point::Arc(..) => (1, 1),
            Point::Node(n) => {
                let rays = self.rays_at(n);
                let o = rays.iter().filter(|r| r.1).count();
                (o, rays.len() - o)
            }
        };
        let class = match (n_o, n_f) {
            (0, 0) => PointClass::Isolated,
            (1, 1) => PointClass::Regular,
            (0, _) => PointClass::Sink,
            (_, 0) => PointClass::Source,
            (1, _) => PointClass::DistinguishedOut,
            (_, 1) => PointClass::DistinguishedIn,
            _ => PointClass::GeneralBranch,
        };
        Ok(Degrees { n_o, n_f, class })
    }

    /// The unique simple walk from `x` to `y` through the underlying graph
    /// (open ends are passed through, never stopped at).
    pub fn walk(&self, x: Point, y: Point) -> Result<Vec<Move>> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x == y {
            return Ok(vec![]);
        }
        if let (Point::Arc(a, c), Point::Arc(b, d)) = (x, y) {
            if a == b {
                return Ok(vec![Move::Along { arc: a, from: c, to: d }]);
            }
        }
        // Vertices: nodes, then the virtual vertices for x and y.
        let n = self.nodes.len();
        let vx = if let Point::Node(v) = x { v } else { n };
        let vy = if let Point::Node(v) = y { v } else { n + 1 };
        let coord = |v: usize, arc: ArcId| -> Dyadic {
            if v == n {
                if let Point::Arc(_, c) = x {
                    return c;
                }
            }
            if v == n + 1 {
                if let Point::Arc(_, c) = y {
                    return c;
                }
            }
            self.arcs[arc].coord_of(v)
        };
        let mut adj: Vec<Vec<(usize, Edge)>> = vec![Vec::new(); n + 2];
        for (i, a) in self.arcs.iter().enumerate() {
            let mut stops: Vec<(Dyadic, usize)> = vec![(a.lo, a.from), (a.hi, a.to)];
            if let Point::Arc(b, c) = x {
                if b == i {
                    stops.push((c, n));
                }
            }
            if let Point::Arc(b, c) = y {
                if b == i {
                    stops.push((c, n + 1));
                }
            }
            stops.sort();
            for w in stops.windows(2) {
                adj[w[0].1].push((w[1].1, Edge::Arc(i)));
                adj[w[1].1].push((w[0].1, Edge::Arc(i)));
            }
        }
        for (i, l) in self.limits.iter().enumerate() {
            adj[l.open_end].push((l.node, Edge::Link(i)));
            adj[l.node].push((l.open_end, Edge::Link(i)));
        }
        let mut parent: Vec<Option<(usize, Edge)>> = vec![None; n + 2];
        let mut seen = vec![false; n + 2];
        seen[vx] = true;
        let mut queue = VecDeque::from([vx]);
        while let Some(v) = queue.pop_front() {
            if v == vy {
                break;
            }
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        if !seen[vy] {
            return Err(Error::InvalidTree(format!(
                "{} and {} are not connected",
                self.format_point(x),
                self.format_point(y)
            )));
        }
        let mut moves = Vec::new();
        let mut v = vy;
        while let Some((u, e)) = parent[v] {
            moves.push(match e {
                Edge::Arc(a) => Move::Along { arc: a, from: coord(u, a), to: coord(v, a) },
                Edge::Link(l) => Move::Through { limit: l, into_node: self.limits[l].node == v },
            });
            v = u;
        }
        moves.reverse();
        Ok(moves)
    }

    /// Adjacency over nodes via arcs and links, for structural checks.
    pub(crate) fn node_edges(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().map(|a| (a.from, a.to)).chain(self.limits.iter().map(|l| (l.open_end, l.node))).collect()
    }

    /// A copy with every orientation reversed.
    pub fn reversed(&self) -> TreeGraph {
        let mut t = self.clone();
        for a in &mut t.arcs {
            a.forward = !a.forward;
        }
        t
    }
}

#[derive(Debug, Clone, Copy)]
enum Edge {
    Arc(ArcId),
    Link(LimitId),
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointClass::Regular => "regular",
            PointClass::Sink => "sink",
            PointClass::Source => "source",
            PointClass::DistinguishedIn => "distinguished-ray(in)",
            PointClass::DistinguishedOut => "distinguished-ray(out)",
            PointClass::GeneralBranch => "general-branch",
            PointClass::Isolated => "isolated",
        };
        f.write_str(s)
    }
}

/// The zigzag-oriented line on `[lo, hi]`: nodes at the integers, arc
/// `[i, i+1]` positive to the right for even `i` and to the left for odd
/// `i`, so even integers are sources and odd integers sinks.
pub fn zigzag_line(lo: i64, hi: i64) -> TreeGraph {
    let mut t = TreeGraph::new();
    for i in lo..=hi {
        t.add_node(i.to_string(), NodeKind::Real);
    }
    for i in lo..hi {
        let k = (i - lo) as usize;
        let a = t.add_arc(k, k + 1, Dyadic::int(i), Dyadic::int(i + 1), i.rem_euclid(2) == 0);
        t.arcs[a].label = format!("[{i},{}]", i + 1);
    }
    t
}

/// The point with coordinate `x` on a line built by [`zigzag_line`].
pub fn line_point(t: &TreeGraph, lo: i64, x: Dyadic) -> Result<Point> {
    if x.is_integer() {
        let k = x.floor() - lo;
        if k >= 0 && (k as usize) < t.nodes.len() {
            return Ok(Point::Node(k as usize));
        }
    } else {
        let k = x.floor() - lo;
        if k >= 0 && (k as usize) < t.arcs.len() {
            return Ok(Point::Arc(k as usize, x));
        }
    }
    Err(Error::Domain(format!("{x} is outside the line")))
}
