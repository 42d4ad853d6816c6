use serde::Serialize;

use super::orbit::{orbit_poset_from_points, OrbitPoset};
use crate::error::{Error, Result};
use crate::group_order::{induced_ball_poset, ConeStructure, GroupModel, Tag};
use crate::order_tree::{denjoy_blowup, ArcOrigin, NodeOrigin, Point};
use crate::report::{Check, Report};
use crate::tree_build::{
    build_stages, greedy_pairs, normalize_decomposition, orient_segments, verify_stage_properties, BuildContext,
};

#[derive(Debug, Clone, Serialize)]
pub struct RoundTrip {
    pub report: Report,
    pub total_pairs: usize,
    pub determined: usize,
    /// Pairs left undetermined by the truncation, as labels.
    pub undetermined: Vec<(String, String)>,
    pub stages: usize,
    #[serde(skip)]
    pub orbit: OrbitPoset,
}

/// Builds the tree for the cone order on `ball(r)`, blows it up, reads the
/// order of the orbit points `ν(g) = g · ν(e)` back and compares it with the
/// cone order pair by pair.
pub fn roundtrip(group: &GroupModel, cones: &ConeStructure, r: usize) -> Result<RoundTrip> {
    let (p, ball) = induced_ball_poset(group, cones, r)?;
    let ctx = BuildContext::new(&p)?;
    let root = ball.index(&group.identity()).expect("identity in ball");
    let dec = normalize_decomposition(&ctx, &greedy_pairs(&ctx, root))?;
    let stages = build_stages(&ctx, root, &dec.stages, usize::MAX)?;
    let last = stages.last().expect("base stage");
    let (tree, orient) = orient_segments(&ctx, last)?;
    let mut report = Report::new(format!("round trip: {} at radius {r}", group.name()));
    let mut built = Check::new("built tree passes the stage properties");
    for c in verify_stage_properties(&ctx, last, &tree).checks.into_iter().chain([orient]) {
        built.merge(c);
    }
    report.push(built);

    let m = denjoy_blowup(&tree.graph)?;
    let points: Vec<Point> = (0..ball.len())
        .map(|g| match tree.points[&ctx.aug(g, Tag::Plain)] {
            Point::Arc(a, c) => Ok(Point::Arc(m.arc_of(ArcOrigin::Original(a)).expect("arc survives"), c)),
            Point::Node(n) => m
                .node_of(&NodeOrigin::Original(n))
                .map(Point::Node)
                .ok_or_else(|| Error::Invariant("a group label sits on a branch point".into())),
        })
        .collect::<Result<_>>()?;
    let orbit = orbit_poset_from_points(&m.graph, group, &ball.elements, &points)?;

    let n = ball.len();
    let mut same = Check::new("orbit order = cone order on determined pairs");
    for i in 0..n {
        for j in i + 1..n {
            match orbit.relation(i, j) {
                Some(rel) => same.expect(rel == p.rel(i, j), || {
                    format!("({}, {}): tree {}, cones {}", p.label(i), p.label(j), rel.symbol(), p.rel(i, j).symbol())
                }),
                None => same.undetermined += 1,
            }
        }
    }
    report.push(same);
    let total = orbit.pair_count();
    let determined = total - orbit.undetermined.len();
    let mut cov = Check::new("determined pairs ≥ 90% of ball pairs");
    cov.expect(10 * determined >= 9 * total, || format!("{determined} of {total}"));
    report.push(cov);
    report.note(format!("{determined} of {total} pairs determined; {} stages", dec.stages.len()));
    let undetermined: Vec<(String, String)> =
        orbit.undetermined.iter().map(|&(i, j)| (p.label(i).to_string(), p.label(j).to_string())).collect();
    for (a, b) in &undetermined {
        report.note(format!("undetermined at truncation: ({a}, {b})"));
    }
    Ok(RoundTrip { report, total_pairs: total, determined, undetermined, stages: dec.stages.len(), orbit })
}
