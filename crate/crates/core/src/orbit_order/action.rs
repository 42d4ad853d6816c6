use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::group_order::{Ball, GroupModel};
use crate::order_tree::{
    apply_point, check_orientation_preserving, denjoy_blowup, lift_map, zigzag_line, ArcOrigin, NodeKind,
    OneManifold, Point, TreeGraph, TreeMap,
};
use crate::report::{Check, Report};

type MapFn = Box<dyn Fn(&[i64]) -> Option<TreeMap> + Send + Sync>;

/// A group acting on a finite tree by partial maps, transported to its
/// blow-up.
pub struct TreeAction {
    pub group: GroupModel,
    pub tree: TreeGraph,
    pub manifold: OneManifold,
    map: MapFn,
}

impl std::fmt::Debug for TreeAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TreeAction").field("group", &self.group).finish_non_exhaustive()
    }
}

impl TreeAction {
    pub fn new(group: GroupModel, tree: TreeGraph, map: MapFn) -> Result<Self> {
        let manifold = denjoy_blowup(&tree)?;
        Ok(Self { group, tree, manifold, map })
    }

    /// The map of `g` on `T` (partial at the truncation).
    pub fn tree_map(&self, g: &[i64]) -> Option<TreeMap> {
        (self.map)(g)
    }

    /// `g · p` for a point of the blow-up; `None` when it leaves the
    /// truncation.
    pub fn act(&self, g: &[i64], p: Point) -> Option<Point> {
        let f = (self.map)(g)?;
        apply_point(&self.manifold.graph, &lift_map(&self.manifold, &f), p)
    }

    /// The blow-up point over an interior point of an arc of `T`.
    pub fn lift_point(&self, p: Point) -> Option<Point> {
        match p {
            Point::Arc(a, c) => Some(Point::Arc(self.manifold.arc_of(ArcOrigin::Original(a))?, c)),
            Point::Node(n) => self.manifold.node_of(&crate::order_tree::NodeOrigin::Original(n)).map(Point::Node),
        }
    }

    /// Identity, composition where defined, and orientation on `T` and on
    /// the blow-up, over `ball` and the sample points.
    pub fn check(&self, ball: &Ball, samples: &[Point]) -> Report {
        let g = &self.group;
        let mut r = Report::new(format!("{} action", g.name()));
        let mut id = Check::new("act(e, ·) = id");
        for &p in samples {
            id.expect(self.act(&g.identity(), p) == Some(p), || self.manifold.graph.format_point(p));
        }
        r.push(id);
        let mut comp = Check::new("act(gh, x) = act(g, act(h, x))");
        for a in &ball.elements {
            for b in &ball.elements {
                for &p in samples {
                    let whole = self.act(&g.multiply(a, b), p);
                    let parts = self.act(b, p).and_then(|q| self.act(a, q));
                    match (whole, parts) {
                        (Some(x), Some(y)) => comp.expect(x == y, || format!("{} · {}", g.format(a), g.format(b))),
                        _ => comp.skipped += 1,
                    }
                }
            }
        }
        r.push(comp);
        let mut on_t = Check::new("orientation preserved on T");
        let mut on_m = Check::new("orientation preserved on the blow-up");
        for w in &ball.elements {
            if let Some(f) = (self.map)(w) {
                on_t.merge(check_orientation_preserving(&self.tree, &f));
                on_m.merge(check_orientation_preserving(&self.manifold.graph, &lift_map(&self.manifold, &f)));
            }
        }
        r.push(on_t);
        r.push(on_m);
        r
    }
}

/// `x ↦ sign·x + shift` on a line built over `lo..=hi` with unit arcs.
pub fn line_map(name: String, lo: i64, hi: i64, sign: i64, shift: i64) -> TreeMap {
    let img = |v: i64| sign * v + shift;
    let nodes = (lo..=hi).map(|v| (lo..=hi).contains(&img(v)).then(|| (img(v) - lo) as usize)).collect();
    let arcs = (lo..hi)
        .map(|v| {
            let left = img(v).min(img(v + 1));
            (lo <= left && left < hi).then(|| (left - lo) as usize)
        })
        .collect();
    TreeMap { name, nodes, arcs }
}

/// The line `[lo, hi]` with every arc positive to the right.
pub fn oriented_line(lo: i64, hi: i64) -> TreeGraph {
    let mut t = TreeGraph::new();
    for i in lo..=hi {
        t.add_node(i.to_string(), NodeKind::Real);
    }
    for i in lo..hi {
        let k = (i - lo) as usize;
        let a = t.add_arc(k, k + 1, Dyadic::int(i), Dyadic::int(i + 1), true);
        t.arcs[a].label = format!("[{i},{}]", i + 1);
    }
    t
}

/// The zigzag line: segments `[i, i+1]` alternately oriented on `[-w, w]`, with
/// `t` shifting two units right and `s` reflecting at `0`.
pub fn dihedral_example(w: i64) -> Result<TreeAction> {
    let g = GroupModel::Dihedral;
    let gm = g.clone();
    TreeAction::new(
        g,
        zigzag_line(-w, w),
        Box::new(move |x: &[i64]| {
            let sign = if x[1] == 0 { 1 } else { -1 };
            Some(line_map(gm.format(x), -w, w, sign, 2 * x[0]))
        }),
    )
}

/// `ℤ` (or `ℤ^k` through its first factor) translating the oriented line
/// `[-w, w]`.
pub fn translation_example(group: GroupModel, w: i64) -> Result<TreeAction> {
    let gm = group.clone();
    TreeAction::new(group, oriented_line(-w, w), Box::new(move |x: &[i64]| Some(line_map(gm.format(x), -w, w, 1, x[0]))))
}

/// Where a point of a line graph sits, as a coordinate.
pub fn line_coordinate(t: &TreeGraph, p: Point) -> Option<Dyadic> {
    match p {
        Point::Arc(_, c) => Some(c),
        Point::Node(n) => t.nodes[n].label.parse::<i64>().ok().map(Dyadic::int),
    }
}
