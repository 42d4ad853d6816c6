use super::graph::TreeGraph;
use crate::report::{Check, Report};

/// Axiom checks on the finite representation. Segments are the monotone
/// arc chains, so closure under reversal and subsegments holds by
/// construction; what remains checkable is reported per axiom.
pub fn check_order_tree_axioms(t: &TreeGraph) -> Report {
    let mut r = Report::new("order tree axioms");
    let mut shape = Check::new("structure");
    shape.expect(true, String::new);
    if let Err(e) = t.validate() {
        shape.fail(|| e.to_string());
        r.push(shape);
        return r;
    }
    r.push(shape);

    let mut ends = Check::new("(1) segments have distinct ends");
    for (i, a) in t.arcs.iter().enumerate() {
        ends.expect(a.from != a.to && a.lo < a.hi, || format!("arc {i}"));
    }
    r.push(ends);

    let n = t.nodes.len();
    let edges = t.node_edges();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut cyc = Check::new("(5) no nontrivial cyclic words");
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        cyc.expect(ra != rb, || format!("cycle closed by {} — {}", t.nodes[a].label, t.nodes[b].label));
        parent[ra] = rb;
    }
    let mut conn = Check::new("(4) connected");
    let root = if n > 0 { find(&mut parent, 0) } else { 0 };
    for v in 0..n {
        let rv = find(&mut parent, v);
        conn.expect(rv == root, || format!("{} is not joined to {}", t.nodes[v].label, t.nodes[0].label));
    }
    r.push(conn);
    r.push(cyc);

    let mut orient = Check::new("orientation: S+ ∩ −S+ = ∅, closed under concatenation");
    for (i, _) in t.limits.iter().enumerate() {
        // A link inherits the orientation of its open end's arc; both
        // directions of travel must disagree.
        orient.expect(t.through_positive(i, true) != t.through_positive(i, false), || format!("limit {i}"));
    }
    for (i, a) in t.arcs.iter().enumerate() {
        orient.expect(a.positive(a.lo, a.hi) != a.positive(a.hi, a.lo), || format!("arc {i}"));
    }
    r.push(orient);
    r
}
