//! One function per subcommand. Each returns reports plus optional
//! artifacts; exit statuses are decided by the caller.

use serde_json::{json, Value};

use super::catalog::{self, Example, Step};
use super::spec::{GroupOrderSpec, PosetSpec, ScenarioSpec, SpecDocument, TreeSpec, SPEC_VERSION};
use crate::error::{Error, Result};
use crate::group_order::{
    blow_up_gplus, check_augmented_between, check_between_equivariance, check_completely_convex,
    check_left_invariance, check_no_singleton_classes, check_r_equivalence, induced_ball_poset, quotient_order,
    verify_cone_axioms, ConeExpr,
};
use crate::order_tree::{check_blowup, check_order_tree_axioms, denjoy_blowup, manifold_to_dot, to_dot, Point};
use crate::orbit_order::{orbit_poset, roundtrip, stabilizer_extension_order};
use crate::poset_core::{full_suite, BetweenTable, ExtendedPoset, Relation};
use crate::report::{Check, Report};
use crate::tree_build::{
    build_stages, greedy_pairs, normalize_decomposition, orient_segments, shortlex_pairs, verify_stage_properties,
    BuildContext,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    Greedy,
    Shortlex,
}

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Output {
    pub reports: Vec<Report>,
    pub artifact: Option<String>,
    pub data: Value,
}

impl Output {
    fn reports(reports: Vec<Report>) -> Self {
        Output { reports, artifact: None, data: Value::Null }
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    pub fn undetermined(&self) -> usize {
        self.reports.iter().flat_map(|r| &r.checks).map(|c| c.undetermined).sum()
    }
}

/// Reads a spec from a file, `-` (stdin) or `example:<name>`.
pub fn load(arg: &str, want: &str) -> Result<SpecDocument> {
    if let Some(name) = arg.strip_prefix("example:") {
        let ex = catalog::find(name).ok_or_else(|| Error::Spec(format!("no example named `{name}`")))?;
        return match want {
            "scenario" => ex
                .steps
                .iter()
                .find_map(|s| match s {
                    Step::Orbit(sc) => Some(SpecDocument::Scenario(sc.clone())),
                    _ => None,
                })
                .ok_or_else(|| Error::Spec(format!("example `{name}` has no scenario"))),
            _ => Ok(SpecDocument::GroupOrder(ex.spec)),
        };
    }
    let text = if arg == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Spec(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Spec(format!("{arg}: {e}")))?
    };
    SpecDocument::parse(&text)
}

fn wrong_kind(doc: &SpecDocument, want: &str) -> Error {
    Error::Spec(format!("expected a {want} spec, got {}", doc.kind()))
}

pub fn group_order(doc: SpecDocument) -> Result<GroupOrderSpec> {
    match doc {
        SpecDocument::GroupOrder(s) => Ok(s),
        d => Err(wrong_kind(&d, "group-order")),
    }
}

fn label(s: &GroupOrderSpec) -> String {
    s.name.clone().unwrap_or_else(|| s.group.name())
}

/// Cone conditions on `ball(r)`; when they hold, the induced order on
/// `ball(r/2)` is cross-checked independently.
pub fn check_cones(s: &GroupOrderSpec, r: usize) -> Result<Output> {
    let (g, c) = (&s.group, &s.cones);
    let mut cones = verify_cone_axioms(g, c, r);
    cones.title = format!("{}: {}", label(s), cones.title);
    let mut out = vec![cones];
    if out[0].passed() {
        let k = (r / 2).max(1);
        let (p, ball) = induced_ball_poset(g, c, k)?;
        let mut ind = Report::new(format!("{}: induced order on ball({k})", label(s)));
        ind.push(p.check_acyclic());
        ind.push(p.check_extension_consistency());
        ind.push(check_left_invariance(g, &p, &ball));
        ind.push(check_between_equivariance(g, &p, &ball));
        ind.note(format!("{} elements; strongly connected: {}", p.len(), yes(p.check_strongly_connected().passed())));
        out.push(ind);
    }
    Ok(Output::reports(out))
}

/// The augmented-between equivalences, `R` and the O-class sizes on the
/// augmented ball.
pub fn check_gplus(s: &GroupOrderSpec, r: usize) -> Result<Output> {
    let (p, _) = induced_ball_poset(&s.group, &s.cones, r)?;
    let gp = blow_up_gplus(&p)?;
    let mut rep = Report::new(format!("{}: G+ on ball({r})", label(s)));
    let mut aug = Check::new("augmented betweenness");
    for (a, b) in p.pairs() {
        aug.merge(check_augmented_between(&gp, a, b));
    }
    rep.push(aug);
    rep.push(check_r_equivalence(&gp));
    rep.push(check_no_singleton_classes(&gp, &BetweenTable::new(&gp.poset)));
    rep.note(format!("{} augmented elements", gp.len()));
    Ok(Output::reports(vec![rep]))
}

pub fn check_poset(s: &PosetSpec) -> Result<Output> {
    let p = s.build()?;
    let mut rep = full_suite(&p);
    rep.title = format!("{}: {}", s.name.as_deref().unwrap_or("poset"), rep.title);
    rep.note(summary(&p));
    Ok(Output { data: json!({ "poset": SpecDocument::Poset(PosetSpec::from_poset(&p, s.name.clone())) }), ..Output::reports(vec![rep]) })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn summary(p: &ExtendedPoset) -> String {
    let counts = p.relation_counts();
    let parts: Vec<String> = counts.iter().map(|(r, n)| format!("{} {n}", r.symbol())).collect();
    format!(
        "{} elements; pairs: {}; strongly connected: {}; trivial extension: {}",
        p.len(),
        parts.join(", "),
        yes(p.check_strongly_connected().passed()),
        yes(p.is_trivial_extension())
    )
}

pub fn build_tree(s: &GroupOrderSpec, stages: usize, r: usize, order: PairOrder, emit: Option<Emit>) -> Result<Output> {
    let g = &s.group;
    let (p, ball) = induced_ball_poset(g, &s.cones, r)?;
    let ctx = BuildContext::new(&p)?;
    let root = ball.index(&g.identity()).expect("identity in ball");
    let pairs = match order {
        PairOrder::Greedy => greedy_pairs(&ctx, root),
        PairOrder::Shortlex => shortlex_pairs(&ctx, root),
    };
    let dec = normalize_decomposition(&ctx, &pairs)?;
    let built = build_stages(&ctx, root, &dec.stages, stages)?;
    let mut reports = Vec::new();
    let mut last = None;
    for st in &built {
        let (tree, orient) = orient_segments(&ctx, st)?;
        let mut rep = verify_stage_properties(&ctx, st, &tree);
        rep.title = format!("{}: stage {} ({} group elements)", label(s), st.stage, st.members.len());
        rep.push(orient);
        reports.push(rep);
        last = Some(tree);
    }
    let tree = last.expect("base stage");
    let top = reports.last_mut().expect("base stage");
    top.note(format!("{} of {} decomposition stages of ball({r}) built", built.len() - 1, dec.stages.len()));
    let artifact = emit.map(|e| match e {
        Emit::Dot => to_dot(&tree.graph, &label(s)),
        Emit::Json => tree_doc(&tree.graph, format!("{}-stage-{}", label(s), built.len() - 1)),
    });
    Ok(Output { reports, artifact, data: Value::Null })
}

fn tree_doc(t: &crate::order_tree::TreeGraph, name: String) -> String {
    SpecDocument::Tree(TreeSpec { version: SPEC_VERSION.into(), name: Some(name), tree: t.clone() }).to_json()
}

pub fn blowup(s: &TreeSpec, emit: Option<Emit>) -> Result<Output> {
    let name = s.name.clone().unwrap_or_else(|| "tree".into());
    let mut ax = check_order_tree_axioms(&s.tree);
    ax.title = format!("{name}: {}", ax.title);
    if !ax.passed() {
        return Ok(Output::reports(vec![ax]));
    }
    let m = denjoy_blowup(&s.tree)?;
    let mut rep = check_blowup(&s.tree, &m);
    rep.title = format!("{name}: {}", rep.title);
    let opens = m.graph.nodes.iter().filter(|n| !matches!(n.kind, crate::order_tree::NodeKind::Real)).count();
    rep.note(format!(
        "blow-up: {} nodes ({} open ends), {} arcs, {} limits",
        m.graph.nodes.len(),
        opens,
        m.graph.arcs.len(),
        m.graph.limits.len()
    ));
    let artifact = emit.map(|e| match e {
        Emit::Dot => manifold_to_dot(&m, &name),
        Emit::Json => tree_doc(&m.graph, format!("{name}-blowup")),
    });
    Ok(Output { reports: vec![ax, rep], artifact, data: Value::Null })
}

pub fn orbit_order(s: &ScenarioSpec, r: usize) -> Result<Output> {
    let (a, x0) = s.action(r)?;
    let g = &a.group;
    let name = s.name.clone().unwrap_or_else(|| format!("{} orbit", g.name()));
    let orbit = match &s.stabilizer_positive {
        Some(pos) => stabilizer_extension_order(&a, x0, r, pos)?,
        None => orbit_poset(&a, x0, r)?,
    };

    let samples: Vec<Point> = (0..a.manifold.graph.arcs.len())
        .map(|i| {
            let arc = &a.manifold.graph.arcs[i];
            Point::Arc(i, arc.lo.midpoint(arc.hi))
        })
        .collect();
    let mut act = a.check(&g.ball(r.min(2)), &samples);
    act.title = format!("{name}: {}", act.title);

    let mut rep = Report::new(format!("{name}: orbit of {} on ball({r})", s.x0));
    let n = orbit.len();
    match &orbit.poset {
        Some(p) => {
            rep.push(p.check_acyclic());
            rep.push(p.check_extension_consistency());
            rep.note(summary(p));
        }
        None => {
            let mut c = Check::new("orbit order determined");
            c.undetermined = orbit.undetermined.len();
            c.examined = orbit.pair_count();
            rep.push(c);
        }
    }
    if let Some(cones) = &s.expect {
        let (p, ball) = induced_ball_poset(g, cones, r)?;
        let mut same = Check::new("orbit order = expected cone order");
        if ball.elements != orbit.elements {
            same.fail(|| "orbit and ball enumerate different elements".into());
        } else {
            for i in 0..n {
                for j in i + 1..n {
                    match orbit.relation(i, j) {
                        Some(rel) => same.expect(rel == p.rel(i, j), || {
                            format!("({}, {}): orbit {}, cones {}", p.label(i), p.label(j), rel, p.rel(i, j))
                        }),
                        None => same.undetermined += 1,
                    }
                }
            }
        }
        rep.push(same);
    }
    let undetermined: Vec<[&str; 2]> =
        orbit.undetermined.iter().map(|&(i, j)| [orbit.labels[i].as_str(), orbit.labels[j].as_str()]).collect();
    for [x, y] in &undetermined {
        rep.note(format!("undetermined at truncation: ({x}, {y})"));
    }
    let data = json!({
        "poset": orbit.poset.as_ref().map(|p| SpecDocument::Poset(PosetSpec::from_poset(p, Some(name.clone())))),
        "undetermined": undetermined,
    });
    Ok(Output { reports: vec![act, rep], artifact: None, data })
}

pub fn quotient(s: &GroupOrderSpec, h: &ConeExpr, r: usize) -> Result<Output> {
    let g = &s.group;
    let convex = check_completely_convex(g, &s.cones, h, r)?;
    if !convex.passed() {
        let mut rep = Report::new(format!("{}: quotient by H on ball({r})", label(s)));
        rep.push(convex);
        return Ok(Output::reports(vec![rep]));
    }
    let cp = quotient_order(g, &s.cones, h, r)?;
    let mut rep = cp.report.clone();
    rep.title = format!("{}: {}", label(s), rep.title);
    let n = cp.len();
    let ids: Vec<usize> = (0..n).collect();
    match cp.to_poset() {
        Ok(q) => rep.note(format!("{n} cosets; total order: {}", yes(q.is_chain(ids)))),
        Err(_) => rep.note(format!("{n} cosets")),
    }
    let rel: Vec<Vec<&str>> =
        (0..n).map(|i| (0..n).map(|j| cp.relation(i, j).map_or("?", Relation::symbol)).collect()).collect();
    Ok(Output { data: json!({ "cosets": cp.labels, "relations": rel }), ..Output::reports(vec![rep]) })
}

pub fn roundtrip_cmd(s: &GroupOrderSpec, r: usize) -> Result<Output> {
    let rt = roundtrip(&s.group, &s.cones, r)?;
    let mut rep = rt.report.clone();
    rep.title = format!("{}: {}", label(s), rep.title);
    let data = json!({
        "total_pairs": rt.total_pairs,
        "determined": rt.determined,
        "undetermined": rt.undetermined,
        "stages": rt.stages,
    });
    Ok(Output { data, ..Output::reports(vec![rep]) })
}

pub fn examples_list() -> Output {
    let list: Vec<Value> = catalog::catalog()
        .iter()
        .map(|e| json!({ "name": e.name, "summary": e.summary, "remarks": e.remarks, "expect_pass": e.expect_pass }))
        .collect();
    let text = catalog::catalog()
        .iter()
        .map(|e| format!("{:<16} {}\n{:<16} {}\n", e.name, e.summary, "", e.remarks))
        .collect::<String>();
    Output { reports: vec![], artifact: Some(text), data: Value::Array(list) }
}

pub fn examples_run(ex: &Example, r: usize, stages: usize) -> Result<Output> {
    let mut out = Output::default();
    let mut steps = Vec::new();
    for step in &ex.steps {
        let (name, o) = match step {
            Step::Cones => ("check-cones", check_cones(&ex.spec, r)?),
            Step::GPlus => ("gplus", check_gplus(&ex.spec, r)?),
            Step::BuildTree => ("build-tree", build_tree(&ex.spec, stages, r, PairOrder::Shortlex, None)?),
            Step::RoundTrip => ("roundtrip", roundtrip_cmd(&ex.spec, r)?),
            Step::Orbit(sc) => ("orbit-order", orbit_order(sc, r)?),
            Step::Quotient(h) => ("quotient", quotient(&ex.spec, h, r)?),
        };
        steps.push(json!({ "step": name, "passed": o.passed() }));
        out.reports.extend(o.reports);
    }
    out.data = json!({ "example": ex.name, "steps": steps });
    Ok(out)
}

/// Reads `--subgroup`: inline JSON or `@path`.
pub fn parse_predicate(arg: &str) -> Result<ConeExpr> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Spec(format!("subgroup predicate: {e}")))
}
