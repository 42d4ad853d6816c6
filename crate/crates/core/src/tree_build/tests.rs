use super::*;
use crate::dyadic::Dyadic;
use crate::group_order::presets::{dihedral_zigzag, integers_standard};
use crate::group_order::{induced_ball_poset, r_equivalent, Ball, GroupModel, Tag};
use crate::order_tree::{Point, PointClass};
use crate::poset_core::{ExtendedPoset, Relation};

pub(crate) fn setup(g: &GroupModel, r: usize) -> (ExtendedPoset, Ball, BuildContext) {
    let cones = match g {
        GroupModel::Integers => integers_standard(),
        _ => dihedral_zigzag(),
    };
    let (p, ball) = induced_ball_poset(g, &cones, r).unwrap();
    let ctx = BuildContext::new(&p).unwrap();
    (p, ball, ctx)
}

fn build(g: &GroupModel, r: usize, greedy: bool, budget: usize) -> (Ball, BuildContext, Vec<LabeledTree>) {
    let (_, ball, ctx) = setup(g, r);
    let root = ball.index(&g.identity()).unwrap();
    let pairs = if greedy { greedy_pairs(&ctx, root) } else { shortlex_pairs(&ctx, root) };
    let d = normalize_decomposition(&ctx, &pairs).unwrap();
    let stages = build_stages(&ctx, root, &d.stages, budget).unwrap();
    (ball, ctx, stages)
}

fn d(s: &str) -> Dyadic {
    Dyadic::parse(s).unwrap()
}

fn id(g: &GroupModel, ball: &Ball, s: &str) -> usize {
    ball.index(&g.parse(s).unwrap()).unwrap()
}

/// Zigzag-line position of a dihedral element acting on `1/4`.
fn zigzag_position(w: &[i64]) -> Dyadic {
    let quarter = d("1/4");
    let x = if w[1] == 0 { quarter } else { Dyadic::ZERO - quarter };
    x + Dyadic::int(2 * w[0])
}

#[test]
fn base_stage_labels() {
    let (_, ball, ctx) = setup(&GroupModel::Integers, 2);
    let x = ball.index(&[0]).unwrap();
    let t0 = base_stage(&ctx, x);
    assert_eq!(t0.nu[&ctx.aug(x, Tag::Minus)].at, d("0"));
    assert_eq!(t0.nu[&ctx.aug(x, Tag::Plain)].at, d("1/2"));
    assert_eq!(t0.nu[&ctx.aug(x, Tag::Plus)].at, d("1"));
}

#[test]
fn closed_initial_segment_is_reduced() {
    let g = GroupModel::Integers;
    let (_, ball, ctx) = setup(&g, 2);
    let (z0, z1, z2) = (id(&g, &ball, "0"), id(&g, &ball, "1"), id(&g, &ball, "2"));
    let m2 = id(&g, &ball, "-2");
    let dec = normalize_decomposition(&ctx, &[(z0, z1), (z0, z2), (z0, m2)]).unwrap();
    // G_1 = B_{0,1}; G_1 ∩ B_{0,2} = {0, 1}, a closed initial segment.
    let g1: Vec<usize> = ctx.between_bits(z0, z1).ones().collect();
    let meet: Vec<usize> = ctx.between_bits(z0, z2).ones().filter(|x| g1.contains(x)).collect();
    assert_eq!(meet.len(), 2);
    assert_eq!(dec.stages.len(), 3);
    assert_eq!((dec.stages[1].x, dec.stages[1].y), (z1, z2));
    assert_eq!(dec.stages[1].form, IntersectionForm::ClosedInitial { x: z0 });
    assert_eq!(dec.case_tags(), vec![StageCase::Case1; 3]);
    // A pair spanning the ball is one stage.
    let one = normalize_decomposition(&ctx, &[(m2, z2)]).unwrap();
    assert_eq!(one.stages.len(), 1);
    assert_eq!(one.stages[0].form, IntersectionForm::Singleton);
    // Uncovered elements are listed.
    let err = normalize_decomposition(&ctx, &[(z0, z2)]).unwrap_err().to_string();
    assert!(err.contains("-1") && err.contains("-2"), "{err}");
}

#[test]
fn integer_stages_lay_one_chain() {
    let g = GroupModel::Integers;
    let (_, ball, ctx) = setup(&g, 3);
    let (z0, z1, z2) = (id(&g, &ball, "0"), id(&g, &ball, "1"), id(&g, &ball, "2"));
    let stage = |x: usize, y: usize, added: Vec<usize>| DecompositionStage {
        x,
        y,
        case: StageCase::Case1,
        form: IntersectionForm::Singleton,
        added,
    };
    let dec = vec![stage(z0, z1, vec![z1]), stage(z1, z2, vec![z2])];
    let stages = build_stages(&ctx, z0, &dec, 6).unwrap();
    let t2 = stages.last().unwrap();
    let (tree, _) = orient_segments(&ctx, t2).unwrap();
    // Labels along the tree from ν(0_-) to ν(2_+) follow the G⁺ chain.
    let from = tree.points[&ctx.aug(z0, Tag::Minus)];
    let to = tree.points[&ctx.aug(z2, Tag::Plus)];
    let pos = super::verify::path_positions(&tree.graph, from, to, &tree.points).unwrap();
    assert_eq!(pos.len(), tree.points.len());
    let labels: Vec<usize> = tree.points.keys().copied().collect();
    for &a in &labels {
        for &b in &labels {
            if ctx.gp.poset.rel(a, b) == Relation::Lt {
                assert!(pos[&a] <= pos[&b]);
                assert_eq!(pos[&a] == pos[&b], r_equivalent(&ctx.gp, a, b));
            }
        }
    }
    // 0_+ and 1_- share a point exactly because nothing lies between them.
    assert_eq!(tree.points[&ctx.aug(z0, Tag::Plus)], tree.points[&ctx.aug(z1, Tag::Minus)]);
    assert!(r_equivalent(&ctx.gp, ctx.aug(z0, Tag::Plus), ctx.aug(z1, Tag::Minus)));
    assert!(!r_equivalent(&ctx.gp, ctx.aug(z0, Tag::Plus), ctx.aug(z2, Tag::Minus)));
}

#[test]
fn all_stages_verify() {
    for g in [GroupModel::Integers, GroupModel::Dihedral] {
        for greedy in [true, false] {
            let (_, ctx, stages) = build(&g, 6, greedy, 6);
            assert_eq!(stages.len(), 7.min(stages.len()));
            for st in &stages {
                let (tree, orient) = orient_segments(&ctx, st).unwrap();
                assert!(orient.passed(), "{orient}");
                let r = verify_stage_properties(&ctx, st, &tree);
                assert!(r.passed(), "{}: {r}", g.name());
            }
        }
    }
}

#[test]
fn corrupted_gluing_is_caught() {
    let (_, ctx, stages) = build(&GroupModel::Dihedral, 3, true, 6);
    let mut bad = stages.last().unwrap().clone();
    let gl = bad.gluings.last_mut().unwrap();
    gl.onto = TreePoint { interval: 0, at: d("1/2") };
    let (tree, _) = orient_segments(&ctx, &bad).unwrap();
    let r = verify_stage_properties(&ctx, &bad, &tree);
    assert!(!r.passed());
    assert!(!r.check("(3) [ν(a), ν(b)] realizes B_{a,b}").unwrap().passed() || !r.check("(1) T_n is a tree").unwrap().passed());
}

#[test]
fn integer_tree_is_monotone() {
    let g = GroupModel::Integers;
    let (ball, ctx, stages) = build(&g, 6, true, 6);
    let (tree, _) = orient_segments(&ctx, stages.last().unwrap()).unwrap();
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            if ball.elements[i][0] < ball.elements[j][0] {
                let p = tree.points[&ctx.aug(i, Tag::Plain)];
                let q = tree.points[&ctx.aug(j, Tag::Plain)];
                let w = tree.graph.walk(p, q).unwrap();
                assert!(w.iter().all(|m| tree.graph.move_positive(m)));
            }
        }
    }
}

#[test]
fn dihedral_tree_is_the_zigzag_line() {
    let g = GroupModel::Dihedral;
    for greedy in [true, false] {
        let (ball, ctx, stages) = build(&g, 6, greedy, usize::MAX);
        let (tree, _) = orient_segments(&ctx, stages.last().unwrap()).unwrap();
        let t = &tree.graph;
        // A line ...
        let deg: Vec<usize> = (0..t.nodes.len()).map(|n| t.rays_at(n).len()).collect();
        assert!(deg.iter().all(|&k| k <= 2));
        // ... carrying the group labels in zigzag-line order,
        let mut by_line: Vec<usize> = (0..ball.len()).collect();
        by_line.sort_by_key(|&i| zigzag_position(&ball.elements[i]));
        let first = tree.points[&ctx.aug(by_line[0], Tag::Plain)];
        let last = tree.points[&ctx.aug(*by_line.last().unwrap(), Tag::Plain)];
        let plain: std::collections::BTreeMap<usize, Point> =
            (0..ball.len()).map(|i| (i, tree.points[&ctx.aug(i, Tag::Plain)])).collect();
        let pos = super::verify::path_positions(t, first, last, &plain).unwrap();
        assert_eq!(pos.len(), ball.len());
        let mut along: Vec<usize> = (0..ball.len()).collect();
        along.sort_by_key(|i| pos[i]);
        assert_eq!(along, by_line);
        // ... with a source or sink between consecutive labels exactly where
        // the zigzag line has an integer between them.
        let quarter = d("1/4");
        let mut skipped = 0;
        for w in by_line.windows(2) {
            let (a, b) = (zigzag_position(&ball.elements[w[0]]), zigzag_position(&ball.elements[w[1]]));
            // Orbit points outside the ball between them: truncation.
            let hidden = (a.floor()..=b.floor() + 1)
                .step_by(1)
                .filter(|m| m % 2 == 0)
                .flat_map(|m| [Dyadic::int(m) + quarter, Dyadic::int(m) - quarter])
                .any(|x| a < x && x < b);
            if hidden {
                skipped += 1;
                continue;
            }
            let integer_between = a.floor() != b.floor();
            let moves = t.walk(plain[&w[0]], plain[&w[1]]).unwrap();
            let turns = moves.windows(2).filter(|m| t.move_positive(&m[0]) != t.move_positive(&m[1])).count();
            assert_eq!(turns, usize::from(integer_between), "{} {}", g.format(&ball.elements[w[0]]), g.format(&ball.elements[w[1]]));
        }
        assert_eq!(skipped, 1);
        let classes: Vec<PointClass> = (0..t.nodes.len()).map(|n| t.degrees(Point::Node(n)).unwrap().class).collect();
        assert!(classes.contains(&PointClass::Sink) && classes.contains(&PointClass::Source));
    }
}

#[test]
fn label_actions() {
    let g = GroupModel::Integers;
    let (ball, ctx, stages) = build(&g, 6, true, 6);
    let (tree, _) = orient_segments(&ctx, stages.last().unwrap()).unwrap();
    let e = act_on_labels(&g, &ball, &ctx, &tree, &g.identity());
    assert!(e.escaped.is_empty() && e.moved.iter().all(|m| m.0 == m.1) && e.passed());
    let one = act_on_labels(&g, &ball, &ctx, &tree, &[1]);
    assert!(one.passed(), "{}", one.equivariance);
    let six = ball.index(&[6]).unwrap();
    let mut esc = one.escaped.clone();
    esc.sort();
    assert_eq!(esc, vec![ctx.aug(six, Tag::Minus), ctx.aug(six, Tag::Plain), ctx.aug(six, Tag::Plus)]);
    for &(a, b) in &one.moved {
        assert_eq!(ball.elements[b / 3][0], ball.elements[a / 3][0] + 1);
        assert_eq!(a % 3, b % 3);
    }

    let g = GroupModel::Dihedral;
    let (ball, ctx, stages) = build(&g, 6, true, usize::MAX);
    let (tree, _) = orient_segments(&ctx, stages.last().unwrap()).unwrap();
    let s = act_on_labels(&g, &ball, &ctx, &tree, &g.parse("s").unwrap());
    assert!(s.passed(), "{}", s.equivariance);
    for &(a, b) in s.moved.iter().filter(|m| m.0 % 3 == 1) {
        let (x, y) = (zigzag_position(&ball.elements[a / 3]), zigzag_position(&ball.elements[b / 3]));
        assert_eq!(y, Dyadic::ZERO - x);
    }
}
