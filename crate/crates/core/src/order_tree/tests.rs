use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dyadic::Dyadic;

fn d(s: &str) -> Dyadic {
    Dyadic::parse(s).unwrap()
}

/// `P1 — A`, `P2 — B`, an open end `J` with limits `P1`, `P2`, and an arc
/// `W → J` positive towards `J`.
fn cusp_tree() -> TreeGraph {
    let mut t = TreeGraph::new();
    let a = t.add_node("A", NodeKind::Real);
    let b = t.add_node("B", NodeKind::Real);
    let p1 = t.add_node("P1", NodeKind::Real);
    let p2 = t.add_node("P2", NodeKind::Real);
    let j = t.add_node("J", NodeKind::OpenEnd);
    let w = t.add_node("W", NodeKind::Real);
    t.add_arc(p1, a, Dyadic::ZERO, Dyadic::ONE, true);
    t.add_arc(p2, b, Dyadic::ZERO, Dyadic::ONE, true);
    t.add_arc(w, j, Dyadic::ZERO, Dyadic::ONE, true);
    t.add_limit(j, p1);
    t.add_limit(j, p2);
    t
}

#[test]
fn single_segment_and_line_pass_axioms() {
    let mut t = TreeGraph::new();
    let a = t.add_node("0", NodeKind::Real);
    let b = t.add_node("1", NodeKind::Real);
    t.add_arc(a, b, Dyadic::ZERO, Dyadic::ONE, true);
    assert!(check_order_tree_axioms(&t).passed());
    let line = zigzag_line(-4, 4);
    let r = check_order_tree_axioms(&line);
    assert!(r.passed(), "{r}");
    assert!(check_order_tree_axioms(&cusp_tree()).passed());
}

#[test]
fn triangle_fails_axiom_five() {
    let mut t = TreeGraph::new();
    let v: Vec<_> = (0..3).map(|i| t.add_node(i.to_string(), NodeKind::Real)).collect();
    for i in 0..3 {
        t.add_arc(v[i], v[(i + 1) % 3], Dyadic::ZERO, Dyadic::ONE, true);
    }
    let r = check_order_tree_axioms(&t);
    assert!(!r.check("(5) no nontrivial cyclic words").unwrap().passed());
    assert!(r.check("(4) connected").unwrap().passed());
}

#[test]
fn zigzag_degrees() {
    let t = zigzag_line(-4, 4);
    for i in -3..=3i64 {
        let p = line_point(&t, -4, Dyadic::int(i)).unwrap();
        let dg = t.degrees(p).unwrap();
        if i % 2 == 0 {
            assert_eq!((dg.n_o, dg.n_f, dg.class), (2, 0, PointClass::Source), "{i}");
        } else {
            assert_eq!((dg.n_o, dg.n_f, dg.class), (0, 2, PointClass::Sink), "{i}");
        }
    }
    let mid = line_point(&t, -4, d("1/2")).unwrap();
    assert_eq!(t.degrees(mid).unwrap().class, PointClass::Regular);
    assert_eq!(t.degrees(Point::Node(0)).unwrap().class, PointClass::Source);
    assert!(t.degrees(Point::Node(99)).is_err());
}

#[test]
fn geodesic_within_one_arc() {
    let t = zigzag_line(-4, 4);
    let x = line_point(&t, -4, d("1/4")).unwrap();
    let y = line_point(&t, -4, d("3/4")).unwrap();
    let g = standard_geodesic(&t, x, y).unwrap();
    assert_eq!(g.segments.len(), 1);
    assert!(verify_standard(&t, &g).passed());
    let s = geodesic_spine(&t, x, y).unwrap();
    assert_eq!(s.cusp_count(), 0);
    assert!(standard_geodesic(&t, x, x).is_err());
}

#[test]
fn geodesic_across_an_integer() {
    let t = zigzag_line(-4, 4);
    let x = line_point(&t, -4, d("1/2")).unwrap();
    let y = line_point(&t, -4, d("3/2")).unwrap();
    let one = line_point(&t, -4, Dyadic::ONE).unwrap();
    let g = standard_geodesic(&t, x, y).unwrap();
    assert_eq!(g.segments.len(), 2);
    assert_eq!(g.segments[0].end, one);
    assert!(g.segments[0].positive && !g.segments[1].positive);
    assert!(verify_standard(&t, &g).passed());
    let s = spine_of(&t, &g);
    assert_eq!(s.parts.len(), 2);
    for c in ["1/2", "3/4", "1", "5/4", "3/2"] {
        assert!(s.contains(line_point(&t, -4, d(c)).unwrap()), "{c}");
    }
    for c in ["1/4", "7/4", "2"] {
        assert!(!s.contains(line_point(&t, -4, d(c)).unwrap()), "{c}");
    }
    assert!(check_spine_against_cuts(&t, x, y).unwrap().passed());
}

#[test]
fn geodesic_through_a_cusp() {
    let t = cusp_tree();
    let a = Point::Node(t.node_by_label("A").unwrap());
    let b = Point::Node(t.node_by_label("B").unwrap());
    let p1 = t.node_by_label("P1").unwrap();
    let p2 = t.node_by_label("P2").unwrap();
    let g = standard_geodesic(&t, a, b).unwrap();
    assert_eq!(g.segments.len(), 4);
    assert_eq!(g.cusps.len(), 1);
    assert_eq!(g.cusps[0].points, (p1, p2));
    assert!(verify_standard(&t, &g).passed(), "{}", verify_standard(&t, &g));
    // The overlap condition (i(σ), f(σ)] = (f(τ), i(τ)].
    let (s, u) = (&g.segments[1], &g.segments[2]);
    let meet = s.points(&t).intersection(&u.points(&t));
    assert_eq!(meet, s.points(&t).remove_point(s.start));
    assert_eq!(meet, u.points(&t).remove_point(u.end));

    let spine = spine_of(&t, &g);
    assert_eq!(spine.cusp_count(), 1);
    assert!(spine.contains(Point::Node(p1)) && spine.contains(Point::Node(p2)));
    assert!(!spine.contains(Point::Arc(2, d("3/4"))));
    assert!(check_spine_against_cuts(&t, a, b).unwrap().passed());
    assert!(check_spine_uniqueness(&t, a, b).unwrap().passed());
}

#[test]
fn rays_and_endpoints() {
    let t = zigzag_line(-4, 4);
    let base = line_point(&t, -4, Dyadic::ZERO).unwrap();
    let samples: Vec<Point> = ["5/2", "11/4", "23/8"].iter().map(|c| line_point(&t, -4, d(c)).unwrap()).collect();
    match finite_ray_endpoint(&t, base, &samples).unwrap() {
        RayOutcome::Endpoints { endpoints, non_separable, check } => {
            assert_eq!(endpoints, vec![t.node_by_label("3").unwrap()]);
            assert!(!non_separable);
            assert!(check.passed(), "{check}");
        }
        o => panic!("{o:?}"),
    }

    let c = cusp_tree();
    let w = Point::Node(c.node_by_label("W").unwrap());
    let s: Vec<Point> = ["1/2", "3/4", "7/8"].iter().map(|x| Point::Arc(2, d(x))).collect();
    match finite_ray_endpoint(&c, w, &s).unwrap() {
        RayOutcome::Endpoints { mut endpoints, non_separable, check } => {
            endpoints.sort();
            assert_eq!(endpoints, vec![c.node_by_label("P1").unwrap(), c.node_by_label("P2").unwrap()]);
            assert!(non_separable);
            assert!(check.passed(), "{check}");
        }
        o => panic!("{o:?}"),
    }

    let mut e = zigzag_line(0, 2);
    let m = e.add_node("M", NodeKind::OpenEnd);
    let stub = e.add_arc(2, m, Dyadic::ZERO, Dyadic::ONE, false);
    let s: Vec<Point> = ["1/2", "3/4"].iter().map(|x| Point::Arc(stub, d(x))).collect();
    assert!(matches!(
        finite_ray_endpoint(&e, Point::Node(0), &s).unwrap(),
        RayOutcome::EscapesTruncation { open_end } if open_end == m
    ));
}

/// A random tree: each new node hangs off an earlier one; some nodes are
/// replaced by open ends with two or three limit nodes.
pub(crate) fn random_tree(rng: &mut ChaCha8Rng, size: usize, cusps: bool) -> TreeGraph {
    let mut t = TreeGraph::new();
    t.add_node("n0", NodeKind::Real);
    for i in 1..size {
        let parent = rng.gen_range(0..i);
        let v = t.add_node(format!("n{i}"), NodeKind::Real);
        let fwd = rng.gen_bool(0.5);
        if rng.gen_bool(0.5) {
            t.add_arc(parent, v, Dyadic::ZERO, Dyadic::ONE, fwd);
        } else {
            t.add_arc(v, parent, Dyadic::ZERO, Dyadic::ONE, fwd);
        }
    }
    if cusps {
        for k in 0..rng.gen_range(0..3) {
            let j = t.add_node(format!("J{k}"), NodeKind::OpenEnd);
            let w = rng.gen_range(0..size);
            t.add_arc(w, j, Dyadic::ZERO, Dyadic::ONE, rng.gen_bool(0.5));
            for m in 0..rng.gen_range(2..4) {
                let p = t.add_node(format!("J{k}p{m}"), NodeKind::Real);
                t.add_limit(j, p);
                // give each limit node a pendant arc
                let q = t.add_node(format!("J{k}q{m}"), NodeKind::Real);
                t.add_arc(p, q, Dyadic::ZERO, Dyadic::ONE, rng.gen_bool(0.5));
            }
        }
    }
    t
}

#[test]
fn random_trees_spines_match_path_intersection() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let size = rng.gen_range(2..8);
        let t = random_tree(&mut rng, size, true);
        assert!(check_order_tree_axioms(&t).passed());
        let pts = sample_points(&t, &[]);
        for _ in 0..6 {
            let x = pts[rng.gen_range(0..pts.len())];
            let y = pts[rng.gen_range(0..pts.len())];
            if x == y {
                continue;
            }
            let g = standard_geodesic(&t, x, y).unwrap();
            let v = verify_standard(&t, &g);
            assert!(v.passed(), "{v}\n{t:?}");
            let c = check_spine_against_cuts(&t, x, y).unwrap();
            assert!(c.passed(), "{c}");
            assert!(check_spine_uniqueness(&t, x, y).unwrap().passed());
        }
    }
}

fn shift_map(t: &TreeGraph, lo: i64, hi: i64, by: i64, mirror: bool) -> TreeMap {
    let img = |x: i64| if mirror { -x } else { x + by };
    let nodes = (lo..=hi).map(|x| (lo..=hi).contains(&img(x)).then(|| (img(x) - lo) as usize)).collect();
    let arcs = (lo..hi)
        .map(|x| {
            let (a, b) = (img(x), img(x + 1));
            let left = a.min(b);
            (left >= lo && left < hi).then(|| (left - lo) as usize)
        })
        .collect();
    let _ = t;
    TreeMap { name: if mirror { "s".into() } else { format!("t^{}", by / 2) }, nodes, arcs }
}

#[test]
fn zigzag_blowup_is_branchless_and_collapses() {
    let t = zigzag_line(-4, 4);
    let m = denjoy_blowup(&t).unwrap();
    let r = check_blowup(&t, &m);
    assert!(r.passed(), "{r}");
    // Seven interior nodes each split into two endpoints and an open end;
    // the two leaves stay single. Every node gets a stub.
    let g = &m.graph;
    let real = (0..g.nodes.len()).filter(|&n| g.is_real(n)).count();
    assert_eq!(real, 7 * 2 + 2);
    assert_eq!(g.nodes.len() - real, 7 + 9);
    assert_eq!(g.arcs.len(), 8 + 9);
    assert_eq!(g.limits.len(), 14);
    // Stub interiors are outside the core and collapse to their node.
    let stub = m.arc_of(ArcOrigin::Stub(4)).unwrap();
    let p = Point::Arc(stub, d("1/2"));
    assert!(!m.in_core(p));
    assert_eq!(m.phi(p), Point::Node(4));
}

#[test]
fn branchless_tree_blows_up_to_itself() {
    let mut t = TreeGraph::new();
    let l = t.add_node("-inf", NodeKind::OpenEnd);
    let a = t.add_node("a", NodeKind::Real);
    let b = t.add_node("b", NodeKind::Real);
    let r = t.add_node("+inf", NodeKind::OpenEnd);
    t.add_arc(l, a, d("0"), d("1"), true);
    t.add_arc(a, b, d("1"), d("2"), true);
    t.add_arc(r, b, d("2"), d("3"), false);
    let m = denjoy_blowup(&t).unwrap();
    assert!(check_blowup(&t, &m).passed());
    assert_eq!(m.graph.nodes.len(), t.nodes.len());
    assert_eq!(m.graph.arcs.len(), t.arcs.len());
    assert!(m.graph.limits.is_empty());
    assert!(m.node_origin.iter().all(|o| matches!(o, NodeOrigin::Original(_))));
    for n in 0..t.nodes.len() {
        let k = m.node_of(&NodeOrigin::Original(n)).unwrap();
        assert_eq!(m.graph.nodes[k].label, t.nodes[n].label);
    }
}

#[test]
fn general_and_distinguished_branch_points() {
    // x has two incoming and two outgoing arcs; y has one incoming (from x)
    // and two outgoing.
    let mut t = TreeGraph::new();
    let names = ["p", "q", "x", "r", "y", "u", "v"];
    for n in names {
        t.add_node(n, NodeKind::Real);
    }
    t.add_arc(0, 2, d("0"), d("1"), true);
    t.add_arc(1, 2, d("0"), d("1"), true);
    t.add_arc(2, 3, d("0"), d("1"), true);
    t.add_arc(2, 4, d("0"), d("1"), true);
    t.add_arc(4, 5, d("0"), d("1"), true);
    t.add_arc(4, 6, d("0"), d("1"), true);
    assert_eq!(t.degrees(Point::Node(2)).unwrap().class, PointClass::GeneralBranch);
    assert_eq!(t.degrees(Point::Node(4)).unwrap().class, PointClass::DistinguishedIn);
    let m = denjoy_blowup(&t).unwrap();
    let r = check_blowup(&t, &m);
    assert!(r.passed(), "{r}");
    assert!(m.arc_of(ArcOrigin::Linear(2)).is_some());
    assert!(m.arc_of(ArcOrigin::Linear(4)).is_none());
    // y: open end on the incoming ray, one endpoint per outgoing ray.
    let j = m.node_of(&NodeOrigin::OpenEnd(Box::new(NodeOrigin::Original(4)))).unwrap();
    assert_eq!(m.graph.limits_of(j).len(), 2);
}

#[test]
fn cusp_input_is_rejected() {
    assert!(denjoy_blowup(&cusp_tree()).is_err());
}

#[test]
fn dihedral_maps_lift_and_preserve_orientation() {
    let t = zigzag_line(-4, 4);
    let m = denjoy_blowup(&t).unwrap();
    for f in [shift_map(&t, -4, 4, 2, false), shift_map(&t, -4, 4, 0, true)] {
        let c = check_orientation_preserving(&t, &f);
        assert!(c.passed(), "{c}");
        let lifted = lift_map(&m, &f);
        let c = check_orientation_preserving(&m.graph, &lifted);
        assert!(c.passed(), "{c}");
        assert!(c.examined > 0);
    }
    // An odd shift reverses the zigzag.
    let bad = shift_map(&t, -4, 4, 1, false);
    assert!(!check_orientation_preserving(&t, &bad).passed());
    // s fixes 0 and sends 1/4 to -1/4.
    let s = shift_map(&t, -4, 4, 0, true);
    let x0 = line_point(&t, -4, d("1/4")).unwrap();
    assert_eq!(apply_point(&t, &s, x0), Some(line_point(&t, -4, d("-1/4")).unwrap()));
}

#[test]
fn json_roundtrip_and_dot() {
    let t = cusp_tree();
    let back = from_json(&to_json(&t)).unwrap();
    assert_eq!(back, t);
    assert!(from_json(r#"{"version": 9, "tree": {"nodes": [], "arcs": []}}"#).is_err());
    assert!(from_json(r#"{"version": 1, "tree": {"nodes": [], "arcs": []}, "extra": 1}"#).is_err());
    let dot = to_dot(&t, "cusp");
    assert_eq!(dot.matches("style=dashed").count(), t.limits.len());
    assert_eq!(dot.matches("->").count(), t.arcs.len() + t.limits.len());
    let m = denjoy_blowup(&zigzag_line(-2, 2)).unwrap();
    assert!(manifold_to_dot(&m, "z").contains("color=gray"));
}
