use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::graph::{ArcId, Move, NodeId, Point, TreeGraph};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Span {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    fn contains(&self, c: Dyadic) -> bool {
        (self.lo < c || (self.lo == c && self.lo_closed)) && (c < self.hi || (c == self.hi && self.hi_closed))
    }

    fn meet(&self, o: &Span) -> Span {
        let (lo, lo_closed) = match self.lo.cmp(&o.lo) {
            std::cmp::Ordering::Less => (o.lo, o.lo_closed),
            std::cmp::Ordering::Greater => (self.lo, self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo, self.lo_closed && o.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&o.hi) {
            std::cmp::Ordering::Less => (self.hi, self.hi_closed),
            std::cmp::Ordering::Greater => (o.hi, o.hi_closed),
            std::cmp::Ordering::Equal => (self.hi, self.hi_closed && o.hi_closed),
        };
        Span { lo, hi, lo_closed, hi_closed }
    }
}

/// A finite union of nodes and arc intervals, kept normalized so that
/// structural equality is set equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PointSet {
    pub nodes: BTreeSet<NodeId>,
    pub spans: BTreeMap<ArcId, Vec<Span>>,
}

impl PointSet {
    pub fn add_point(&mut self, p: Point) {
        match p {
            Point::Node(n) => {
                self.nodes.insert(n);
            }
            Point::Arc(a, c) => self.add_span(a, Span { lo: c, hi: c, lo_closed: true, hi_closed: true }),
        }
    }

    pub fn add_span(&mut self, arc: ArcId, s: Span) {
        if s.is_empty() {
            return;
        }
        let v = self.spans.entry(arc).or_default();
        v.push(s);
        v.sort();
        let mut merged: Vec<Span> = Vec::with_capacity(v.len());
        for s in v.drain(..) {
            match merged.last_mut() {
                Some(m) if s.lo < m.hi || (s.lo == m.hi && (s.lo_closed || m.hi_closed)) => {
                    if s.hi > m.hi {
                        m.hi = s.hi;
                        m.hi_closed = s.hi_closed;
                    } else if s.hi == m.hi {
                        m.hi_closed |= s.hi_closed;
                    }
                    if s.lo == m.lo {
                        m.lo_closed |= s.lo_closed;
                    }
                }
                _ => merged.push(s),
            }
        }
        *v = merged;
    }

    pub fn union(&mut self, o: &PointSet) {
        self.nodes.extend(o.nodes.iter().copied());
        for (&a, v) in &o.spans {
            for s in v {
                self.add_span(a, *s);
            }
        }
    }

    pub fn intersection(&self, o: &PointSet) -> PointSet {
        let mut r = PointSet { nodes: self.nodes.intersection(&o.nodes).copied().collect(), ..Default::default() };
        for (a, v) in &self.spans {
            if let Some(w) = o.spans.get(a) {
                for s in v {
                    for t in w {
                        r.add_span(*a, s.meet(t));
                    }
                }
            }
        }
        r
    }

    pub fn remove_point(&self, p: Point) -> PointSet {
        let mut r = self.clone();
        match p {
            Point::Node(n) => {
                r.nodes.remove(&n);
            }
            Point::Arc(a, c) => {
                if let Some(v) = r.spans.remove(&a) {
                    for s in v {
                        if s.contains(c) {
                            r.add_span(a, Span { hi: c, hi_closed: false, ..s });
                            r.add_span(a, Span { lo: c, lo_closed: false, ..s });
                        } else {
                            r.add_span(a, s);
                        }
                    }
                }
            }
        }
        r
    }

    pub fn contains(&self, p: Point) -> bool {
        match p {
            Point::Node(n) => self.nodes.contains(&n),
            Point::Arc(a, c) => self.spans.get(&a).is_some_and(|v| v.iter().any(|s| s.contains(c))),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.spans.is_empty()
    }

    pub fn single(p: Point) -> PointSet {
        let mut s = PointSet::default();
        s.add_point(p);
        s
    }

    pub fn is_subset(&self, o: &PointSet) -> bool {
        self.intersection(o) == *self
    }
}

/// A monotone oriented run of a walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
    pub moves: Vec<Move>,
    pub positive: bool,
}

impl Segment {
    pub fn points(&self, t: &TreeGraph) -> PointSet {
        let mut s = PointSet::single(self.start);
        for m in &self.moves {
            if let Move::Along { arc, from, to } = *m {
                let (lo, hi) = if from < to { (from, to) } else { (to, from) };
                s.add_span(arc, Span { lo, hi, lo_closed: false, hi_closed: false });
            }
            if let Some(p) = move_end(t, m) {
                s.add_point(p);
            }
        }
        s
    }
}

/// The cusp `[p1, p2]^c` and the indices of its witnessing segment pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspRecord {
    pub points: (NodeId, NodeId),
    pub open_end: NodeId,
    pub witness: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Geodesic {
    pub x: Point,
    pub y: Point,
    pub segments: Vec<Segment>,
    pub cusps: Vec<CuspRecord>,
}

/// Knobs for building alternative (equally standard) geodesics.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicOptions {
    /// The turning point of a cusp pair sits `2^-cusp_depth` of the way
    /// along the open-end arc.
    pub cusp_depth: u32,
    /// Split this non-cusp segment in two at an interior point.
    pub extra_split: Option<usize>,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        GeodesicOptions { cusp_depth: 1, extra_split: None }
    }
}

fn move_end(t: &TreeGraph, m: &Move) -> Option<Point> {
    match *m {
        Move::Along { arc, to, .. } => match t.point_on(arc, to) {
            Point::Node(n) if !t.is_real(n) => None,
            p => Some(p),
        },
        Move::Through { limit, into_node } => into_node.then(|| Point::Node(t.limits[limit].node)),
    }
}

pub fn standard_geodesic(t: &TreeGraph, x: Point, y: Point) -> Result<Geodesic> {
    standard_geodesic_with(t, x, y, GeodesicOptions::default())
}

pub fn standard_geodesic_with(t: &TreeGraph, x: Point, y: Point, opts: GeodesicOptions) -> Result<Geodesic> {
    if x == y {
        return Err(Error::Domain("a geodesic needs distinct endpoints".into()));
    }
    let walk = t.walk(x, y)?;
    // Expand limit→open end→limit into a turn inside the open-end arc.
    let mut moves: Vec<Move> = Vec::with_capacity(walk.len() + 2);
    let mut cut_before: BTreeSet<usize> = BTreeSet::new();
    let mut cusp_at: Vec<(usize, NodeId, NodeId, NodeId)> = Vec::new();
    let mut i = 0;
    while i < walk.len() {
        if let (Move::Through { limit: l1, into_node: false }, Some(Move::Through { limit: l2, into_node: true })) =
            (walk[i], walk.get(i + 1).copied())
        {
            let j = t.limits[l1].open_end;
            let arc = t.open_end_arc(j).expect("validated open end");
            let a = &t.arcs[arc];
            let cj = a.coord_of(j);
            let mut z = a.coord_of(a.other(j));
            for _ in 0..opts.cusp_depth {
                z = cj.midpoint(z);
            }
            cut_before.insert(moves.len());
            cusp_at.push((moves.len(), t.limits[l1].node, t.limits[l2].node, j));
            moves.push(walk[i]);
            moves.push(Move::Along { arc, from: cj, to: z });
            moves.push(Move::Along { arc, from: z, to: cj });
            moves.push(walk[i + 1]);
            cut_before.insert(moves.len());
            i += 2;
        } else {
            moves.push(walk[i]);
            i += 1;
        }
    }
    // Group into monotone runs.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=moves.len() {
        if k == moves.len() || cut_before.contains(&k) || t.move_positive(&moves[k]) != t.move_positive(&moves[k - 1]) {
            runs.push((start, k));
            start = k;
        }
    }
    let mut segments = Vec::new();
    let mut cusps = Vec::new();
    let mut cur = x;
    for (ri, &(a, b)) in runs.iter().enumerate() {
        let mut ms: Vec<Move> = moves[a..b].to_vec();
        let positive = t.move_positive(&ms[0]);
        let in_cusp = cusp_at.iter().any(|c| c.0 == a || c.0 + 2 == a);
        if opts.extra_split == Some(ri) && !in_cusp {
            if let Some(pos) = ms.iter().position(|m| matches!(m, Move::Along { .. })) {
                if let Move::Along { arc, from, to } = ms[pos] {
                    let mid = from.midpoint(to);
                    let first: Vec<Move> =
                        ms[..pos].iter().copied().chain([Move::Along { arc, from, to: mid }]).collect();
                    let end = t.point_on(arc, mid);
                    segments.push(Segment { start: cur, end, moves: first, positive });
                    cur = end;
                    ms = [Move::Along { arc, from: mid, to }].into_iter().chain(ms[pos + 1..].iter().copied()).collect();
                }
            }
        }
        let end = move_end(t, ms.last().unwrap()).ok_or_else(|| Error::Invariant("segment ends at an open end".into()))?;
        if let Some(c) = cusp_at.iter().find(|c| c.0 == a) {
            cusps.push(CuspRecord { points: (c.1, c.2), open_end: c.3, witness: (segments.len(), segments.len() + 1) });
        }
        segments.push(Segment { start: cur, end, moves: ms, positive });
        cur = end;
    }
    Ok(Geodesic { x, y, segments, cusps })
}

/// Post-hoc check of both standard-geodesic conditions and of the path
/// structure.
pub fn verify_standard(t: &TreeGraph, g: &Geodesic) -> Check {
    let mut c = Check::new("standard geodesic");
    let sets: Vec<PointSet> = g.segments.iter().map(|s| s.points(t)).collect();
    let fp = |p| t.format_point(p);
    c.expect(g.segments.first().map(|s| s.start) == Some(g.x), || "path does not start at x".into());
    c.expect(g.segments.last().map(|s| s.end) == Some(g.y), || "path does not end at y".into());
    for (i, s) in g.segments.iter().enumerate() {
        c.expect(s.start != s.end, || format!("segment {i} is degenerate"));
        c.expect(s.moves.iter().all(|m| t.move_positive(m) == s.positive), || format!("segment {i} is not monotone"));
        for j in i + 2..g.segments.len() {
            c.expect(sets[i].intersection(&sets[j]).is_empty(), || format!("segments {i} and {j} meet"));
        }
        if let Some(n) = g.segments.get(i + 1) {
            c.expect(s.end == n.start, || format!("segments {i}, {} do not chain", i + 1));
            let meet = sets[i].intersection(&sets[i + 1]);
            let plain = meet == PointSet::single(s.end);
            let cusp = meet == sets[i].remove_point(s.start) && meet == sets[i + 1].remove_point(n.end) && s.start != n.end;
            c.expect(plain || cusp, || format!("segments {i}, {} meet in neither a point nor a cusp overlap at {}", i + 1, fp(s.end)));
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SpinePart {
    Segment(Segment),
    Cusp { p1: NodeId, p2: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicSpine {
    pub x: Point,
    pub y: Point,
    pub parts: Vec<SpinePart>,
    pub set: PointSet,
}

impl GeodesicSpine {
    pub fn contains(&self, p: Point) -> bool {
        self.set.contains(p)
    }

    pub fn cusp_count(&self) -> usize {
        self.parts.iter().filter(|p| matches!(p, SpinePart::Cusp { .. })).count()
    }
}

pub fn spine_of(t: &TreeGraph, g: &Geodesic) -> GeodesicSpine {
    let mut parts = Vec::new();
    let mut set = PointSet::default();
    let mut i = 0;
    while i < g.segments.len() {
        if let Some(c) = g.cusps.iter().find(|c| c.witness.0 == i) {
            parts.push(SpinePart::Cusp { p1: c.points.0, p2: c.points.1 });
            set.add_point(Point::Node(c.points.0));
            set.add_point(Point::Node(c.points.1));
            i += 2;
        } else {
            set.union(&g.segments[i].points(t));
            parts.push(SpinePart::Segment(g.segments[i].clone()));
            i += 1;
        }
    }
    GeodesicSpine { x: g.x, y: g.y, parts, set }
}

pub fn geodesic_spine(t: &TreeGraph, x: Point, y: Point) -> Result<GeodesicSpine> {
    Ok(spine_of(t, &standard_geodesic(t, x, y)?))
}

/// The spine does not depend on the cusp turning point or on how runs are
/// subdivided.
pub fn check_spine_uniqueness(t: &TreeGraph, x: Point, y: Point) -> Result<Check> {
    let base = geodesic_spine(t, x, y)?;
    let mut c = Check::new("spine uniqueness");
    let n = standard_geodesic(t, x, y)?.segments.len();
    let mut variants = vec![GeodesicOptions { cusp_depth: 2, extra_split: None }, GeodesicOptions { cusp_depth: 3, extra_split: None }];
    variants.extend((0..n).map(|k| GeodesicOptions { cusp_depth: 1, extra_split: Some(k) }));
    for o in variants {
        let g = standard_geodesic_with(t, x, y, o)?;
        c.merge(verify_standard(t, &g));
        let s = spine_of(t, &g);
        c.expect(s.set == base.set, || format!("spine differs under {o:?}"));
    }
    Ok(c)
}

/// Points sampled for the path-intersection oracle: all real nodes plus,
/// on each arc, the given coordinates, the quarter points and midpoints
/// between consecutive stops.
pub fn sample_points(t: &TreeGraph, extra: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = (0..t.nodes.len()).filter(|&n| t.is_real(n)).map(Point::Node).collect();
    for (i, a) in t.arcs.iter().enumerate() {
        let mut stops: Vec<Dyadic> = vec![a.lo, a.hi, a.lo.midpoint(a.hi), a.lo.midpoint(a.lo.midpoint(a.hi)), a.hi.midpoint(a.lo.midpoint(a.hi))];
        stops.extend(extra.iter().filter_map(|p| match p {
            Point::Arc(b, c) if *b == i => Some(*c),
            _ => None,
        }));
        stops.sort();
        stops.dedup();
        for w in stops.windows(2) {
            out.push(Point::Arc(i, w[0].midpoint(w[1])));
        }
        out.extend(stops.iter().filter(|&&c| a.lo < c && c < a.hi).map(|&c| Point::Arc(i, c)));
    }
    out.sort();
    out.dedup();
    out
}

/// The intersection of all paths from `x` to `y`, evaluated on sample
/// points: a point lies on every path iff it is an endpoint or removing it
/// disconnects `x` from `y` in the sampled graph.
pub fn spine_by_cuts(t: &TreeGraph, x: Point, y: Point, samples: &[Point]) -> Vec<bool> {
    // Vertices: nodes (open ends included, never removed) then samples.
    let n = t.nodes.len();
    let vid = |p: Point| -> usize {
        match p {
            Point::Node(k) => k,
            Point::Arc(..) => n + samples.iter().position(|&q| q == p).expect("sampled"),
        }
    };
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + samples.len()];
    for (i, a) in t.arcs.iter().enumerate() {
        let mut on: Vec<(Dyadic, usize)> = vec![(a.lo, a.from), (a.hi, a.to)];
        on.extend(samples.iter().filter_map(|&p| match p {
            Point::Arc(b, c) if b == i => Some((c, vid(p))),
            _ => None,
        }));
        on.sort();
        for w in on.windows(2) {
            adj[w[0].1].push(w[1].1);
            adj[w[1].1].push(w[0].1);
        }
    }
    for l in &t.limits {
        adj[l.open_end].push(l.node);
        adj[l.node].push(l.open_end);
    }
    let (vx, vy) = (vid(x), vid(y));
    let connected_without = |cut: usize| {
        let mut seen = vec![false; adj.len()];
        seen[cut] = true;
        seen[vx] = true;
        let mut q = VecDeque::from([vx]);
        while let Some(v) = q.pop_front() {
            if v == vy {
                return true;
            }
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        false
    };
    samples.iter().map(|&p| p == x || p == y || !connected_without(vid(p))).collect()
}

/// Spine membership agrees with the cut oracle on every sample point.
pub fn check_spine_against_cuts(t: &TreeGraph, x: Point, y: Point) -> Result<Check> {
    let spine = geodesic_spine(t, x, y)?;
    let samples = sample_points(t, &[x, y]);
    let oracle = spine_by_cuts(t, x, y, &samples);
    let mut c = Check::new("spine = ∩ paths");
    for (p, o) in samples.iter().zip(oracle) {
        c.expect(spine.contains(*p) == o, || {
            format!("{} from {} to {}: spine says {}, cuts say {o}", t.format_point(*p), t.format_point(x), t.format_point(y), spine.contains(*p))
        });
    }
    Ok(c)
}
