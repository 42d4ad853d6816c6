use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dyadic::Dyadic;
use crate::group_order::presets::{dihedral_zigzag, integers_standard, lattice_lex};
use crate::group_order::{induced_ball_poset, CmpOp, ConeExpr, GroupModel};
use crate::order_tree::{denjoy_blowup, zigzag_line, ArcOrigin, Point};
use crate::poset_core::{ExtendedPoset, Relation};

fn d(s: &str) -> Dyadic {
    Dyadic::parse(s).unwrap()
}

/// `x0 = 1/4` on `[0, 1]`, as a point of the blow-up.
fn quarter(a: &TreeAction, w: i64) -> Point {
    a.lift_point(Point::Arc(w as usize, d("1/4"))).unwrap()
}

#[test]
fn manifold_order_basics() {
    let m = denjoy_blowup(&oriented_line(0, 1)).unwrap();
    let arc = m.arc_of(ArcOrigin::Original(0)).unwrap();
    let (x, y) = (Point::Arc(arc, d("1/4")), Point::Arc(arc, d("3/4")));
    assert_eq!(manifold_order(&m.graph, x, y).unwrap(), Some(Relation::Lt));
    assert_eq!(manifold_order(&m.graph, y, x).unwrap(), Some(Relation::Gt));
    assert_eq!(manifold_order(&m.graph, x, x).unwrap(), Some(Relation::Eq));
}

#[test]
fn stubs_of_adjacent_sinks() {
    // Sinks at 1 and 3, a source at 2; stubs leave sinks positively.
    let t = zigzag_line(0, 4);
    let m = denjoy_blowup(&t).unwrap();
    let stub = |x: usize| Point::Arc(m.arc_of(ArcOrigin::Stub(x)).unwrap(), d("1/2"));
    assert_eq!(manifold_order(&m.graph, stub(1), stub(3)).unwrap(), Some(Relation::SimL));
    // Facing points across the sink at 1 share the stub above it.
    let p = Point::Arc(m.arc_of(ArcOrigin::Original(0)).unwrap(), d("1/2"));
    let q = Point::Arc(m.arc_of(ArcOrigin::Original(1)).unwrap(), d("3/2"));
    assert_eq!(manifold_order(&m.graph, p, q).unwrap(), Some(Relation::SimU));
    // The source stub lies below both sink stubs.
    assert_eq!(manifold_order(&m.graph, stub(2), stub(1)).unwrap(), Some(Relation::Lt));
    // Branch points of T are outside the domain.
    assert!(manifold_order(&t, Point::Node(1), Point::Node(3)).is_err());
}

#[test]
fn zigzag_orbit_matches_frozen_cones() {
    let g = GroupModel::Dihedral;
    let a = dihedral_example(14).unwrap();
    let x0 = quarter(&a, 14);
    let orbit = orbit_poset(&a, x0, 6).unwrap();
    assert!(orbit.undetermined.is_empty());
    let (p, ball) = induced_ball_poset(&g, &dihedral_zigzag(), 6).unwrap();
    assert_eq!(ball.elements, orbit.elements);
    for i in 0..p.len() {
        for j in 0..p.len() {
            assert_eq!(orbit.relation(i, j), Some(p.rel(i, j)), "{} {}", p.label(i), p.label(j));
        }
    }
    // Orbit points sit at 2n ± 1/4.
    for (w, i) in ball.elements.iter().zip(0..) {
        let q = a.act(w, x0).unwrap();
        let c = match q {
            Point::Arc(_, c) => c,
            _ => panic!("orbit point on a node"),
        };
        let expect = Dyadic::int(2 * w[0]) + if w[1] == 0 { d("1/4") } else { d("-1/4") };
        assert_eq!(c, expect, "#{i}");
    }
}

#[test]
fn dihedral_orbit_is_acyclic_but_not_connected() {
    let a = dihedral_example(14).unwrap();
    let orbit = orbit_poset(&a, quarter(&a, 14), 6).unwrap();
    let p: &ExtendedPoset = orbit.poset.as_ref().unwrap();
    assert!(p.check_acyclic().passed());
    assert!(!p.check_strongly_connected().passed());
    let counts = p.relation_counts();
    let count = |r: Relation| counts.iter().find(|c| c.0 == r).map_or(0, |c| c.1);
    assert!(count(Relation::SimU) > 0 && count(Relation::SimL) > 0, "{counts:?}");
    // No incomparable pair has a common bound in the orbit.
    for (i, j) in p.pairs() {
        if p.rel(i, j).is_incomparable() {
            assert!(!p.has_common_upper(i, j) && !p.has_common_lower(i, j));
        }
    }
}

#[test]
fn stub_point_has_a_stabilizer() {
    let a = dihedral_example(6).unwrap();
    let zero = a.tree.node_by_label("0").unwrap();
    let mid = Point::Arc(a.manifold.arc_of(ArcOrigin::Stub(zero)).unwrap(), d("1/2"));
    let err = orbit_poset(&a, mid, 2).unwrap_err().to_string();
    assert!(err.contains("`s` fixes"), "{err}");
}

#[test]
fn dihedral_action_invariants() {
    let a = dihedral_example(6).unwrap();
    let ball = GroupModel::Dihedral.ball(2);
    let samples: Vec<Point> = (0..a.manifold.graph.arcs.len()).map(|i| Point::Arc(i, {
        let arc = &a.manifold.graph.arcs[i];
        arc.lo.midpoint(arc.hi)
    })).collect();
    let r = a.check(&ball, &samples);
    assert!(r.passed(), "{r}");
    // s sends the stub above 1 to the stub above -1.
    let one = a.tree.node_by_label("1").unwrap();
    let minus_one = a.tree.node_by_label("-1").unwrap();
    let p = Point::Arc(a.manifold.arc_of(ArcOrigin::Stub(one)).unwrap(), d("1/4"));
    let q = Point::Arc(a.manifold.arc_of(ArcOrigin::Stub(minus_one)).unwrap(), d("1/4"));
    assert_eq!(a.act(&[0, 1], p), Some(q));
}

#[test]
fn integers_translate_a_chain() {
    let g = GroupModel::Integers;
    let a = translation_example(g.clone(), 8).unwrap();
    let x0 = a.lift_point(Point::Node(8)).unwrap();
    let orbit = orbit_poset(&a, x0, 6).unwrap();
    let (p, _) = induced_ball_poset(&g, &integers_standard(), 6).unwrap();
    let q = orbit.poset.unwrap();
    assert!(q.is_chain(0..q.len()));
    assert!((0..p.len()).all(|i| (0..p.len()).all(|j| p.rel(i, j) == q.rel(i, j))));
}

#[test]
fn stabilizer_refinement() {
    let z2 = GroupModel::Lattice { rank: 2 };
    let a = translation_example(z2.clone(), 8).unwrap();
    let x0 = a.lift_point(Point::Node(8)).unwrap();
    assert!(orbit_poset(&a, x0, 3).unwrap_err().to_string().contains("fixes"));
    let up = ConeExpr::cmp(1, CmpOp::Gt, 0);
    let o = stabilizer_extension_order(&a, x0, 3, &up).unwrap();
    let (lex, _) = induced_ball_poset(&z2, &lattice_lex(), 3).unwrap();
    for i in 0..lex.len() {
        for j in 0..lex.len() {
            assert_eq!(o.relation(i, j), Some(lex.rel(i, j)));
        }
    }
    let not_total = ConeExpr::cmp(1, CmpOp::Ne, 0);
    assert!(stabilizer_extension_order(&a, x0, 3, &not_total).is_err());
    // A trivial stabilizer changes nothing.
    let z = GroupModel::Integers;
    let b = translation_example(z, 8).unwrap();
    let y0 = b.lift_point(Point::Node(8)).unwrap();
    assert_eq!(stabilizer_extension_order(&b, y0, 4, &up).unwrap().rel, orbit_poset(&b, y0, 4).unwrap().rel);
}

#[test]
fn roundtrips() {
    for (g, c) in [(GroupModel::Integers, integers_standard()), (GroupModel::Dihedral, dihedral_zigzag())] {
        let rt = roundtrip(&g, &c, 6).unwrap();
        assert!(rt.report.passed(), "{}", rt.report);
        assert!(10 * rt.determined >= 9 * rt.total_pairs);
    }
}

#[test]
fn manifold_order_on_random_blowups() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let t = crate::order_tree::tests::random_tree(&mut rng, 9, false);
        let m = denjoy_blowup(&t).unwrap();
        let pts: Vec<Point> = (0..m.graph.arcs.len())
            .map(|i| {
                let a = &m.graph.arcs[i];
                Point::Arc(i, a.lo.midpoint(a.hi))
            })
            .collect();
        let table = manifold_order_table(&m.graph, &pts).unwrap();
        let n = pts.len();
        // Agrees with the pairwise query.
        for i in 0..n.min(6) {
            for j in 0..n {
                assert_eq!(table[i * n + j], manifold_order(&m.graph, pts[i], pts[j]).unwrap());
            }
        }
        // Complete finite instances: every pair determined, the order
        // extension-consistent, acyclic and strongly connected.
        assert!(table.iter().all(|r| r.is_some()));
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let p = ExtendedPoset::new(labels, |i, j| table[i * n + j].unwrap()).unwrap();
        assert!(p.check_acyclic().passed());
        assert!(p.check_extension_consistency().passed());
        assert!(p.check_strongly_connected().passed(), "{}", p.check_strongly_connected());
    }
}
