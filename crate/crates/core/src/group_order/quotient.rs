use std::collections::BTreeSet;

use serde::Serialize;

use super::cone::{classify_group, poset_on, ConeExpr, ConeStructure};
use super::group::{Ball, GroupModel, Word};
use crate::error::{Error, Result};
use crate::poset_core::{between_raw, full_suite, ExtendedPoset, Relation};
use crate::report::{Check, Report};

/// Closure of `H ∩ ball` under products and inverses that stay in the ball.
pub fn check_subgroup(g: &GroupModel, h: &ConeExpr, ball: &Ball) -> Result<()> {
    let hs: Vec<&Word> = ball.elements.iter().filter(|w| h.eval(g, w)).collect();
    if !h.eval(g, &g.identity()) {
        return Err(Error::Precondition("H does not contain the identity".into()));
    }
    for x in &hs {
        if !h.eval(g, &g.invert(x)) {
            return Err(Error::Precondition(format!("H is not closed under inverse at {}", g.format(x))));
        }
        for y in &hs {
            let p = g.multiply(x, y);
            if ball.contains(&p) && !h.eval(g, &p) {
                return Err(Error::Precondition(format!(
                    "H is not closed under products: {}·{} = {}",
                    g.format(x),
                    g.format(y),
                    g.format(&p)
                )));
            }
        }
    }
    Ok(())
}

/// `g h g⁻¹ ∈ H` for `g ∈ ball`, `h ∈ H ∩ ball`.
pub fn check_normal(g: &GroupModel, h: &ConeExpr, ball: &Ball) -> Check {
    let mut c = Check::new("H normal");
    let hs: Vec<&Word> = ball.elements.iter().filter(|w| h.eval(g, w)).collect();
    for x in &ball.elements {
        let xi = g.invert(x);
        for y in &hs {
            let conj = g.multiply(&g.multiply(x, y), &xi);
            c.expect(h.eval(g, &conj), || format!("{}·{}·{}⁻¹ ∉ H", g.format(x), g.format(y), g.format(x)));
        }
    }
    c
}

/// `B_{h1,h2} ⊂ H` for `h1, h2 ∈ H ∩ ball(r)`, between sets computed in
/// `ball(2r)`.
pub fn check_completely_convex(g: &GroupModel, c: &ConeStructure, h: &ConeExpr, r: usize) -> Result<Check> {
    check_subgroup(g, h, &g.ball(r))?;
    let big = g.ball(2 * r);
    let p = poset_on(g, c, &big.elements)?;
    let hs: Vec<usize> = (0..big.len()).filter(|&i| big.lengths[i] <= r && h.eval(g, &big.elements[i])).collect();
    let mut check = Check::new("completely convex");
    for &a in &hs {
        for &b in &hs {
            if a == b {
                continue;
            }
            for x in 0..big.len() {
                if between_raw(&p, a, x, b) {
                    check.expect(h.eval(g, &big.elements[x]), || {
                        format!("{} ∈ B_({},{}) but not in H", p.label(x), p.label(a), p.label(b))
                    });
                }
            }
        }
    }
    Ok(check)
}

/// The induced order on the cosets met by `ball(r)`.
#[derive(Debug, Clone, Serialize)]
pub struct CosetPoset {
    pub representatives: Vec<Word>,
    pub labels: Vec<String>,
    /// Row-major; `None` marks pairs whose relation is not unique within
    /// the search window.
    pub rel: Vec<Option<Relation>>,
    pub report: Report,
}

impl CosetPoset {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn relation(&self, i: usize, j: usize) -> Option<Relation> {
        self.rel[i * self.len() + j]
    }

    /// The coset order as an extended poset, if every pair is determined.
    pub fn to_poset(&self) -> Result<ExtendedPoset> {
        if self.rel.iter().any(Option::is_none) {
            return Err(Error::Precondition("quotient has undetermined pairs".into()));
        }
        let n = self.len();
        ExtendedPoset::new(self.labels.clone(), |a, b| self.rel[a * n + b].unwrap())
    }
}

fn coset_relation(
    g: &GroupModel,
    c: &ConeStructure,
    x: &[i64],
    y: &[i64],
    hs: &[Word],
) -> Result<BTreeSet<Relation>> {
    let mut found = BTreeSet::new();
    for h in hs {
        found.insert(classify_group(g, c, x, &g.multiply(y, h))?);
    }
    Ok(found)
}

fn group_between(g: &GroupModel, c: &ConeStructure, a: &[i64], x: &[i64], b: &[i64]) -> Result<bool> {
    if a == x || b == x {
        return Ok(true);
    }
    let els = [a, x, b];
    let t: Vec<Relation> = (0..9).map(|k| classify_group(g, c, els[k / 3], els[k % 3])).collect::<Result<_>>()?;
    let p = ExtendedPoset::new_formal(vec!["a".into(), "x".into(), "b".into()], |i, j| t[i * 3 + j])?;
    Ok(between_raw(&p, 0, 1, 2))
}

/// `g₁H < g₂H` iff `g₁ < g₂h` for some `h ∈ H`, and likewise for the
/// other relations. `h` ranges over `H ∩ ball(2r)`.
pub fn quotient_order(g: &GroupModel, c: &ConeStructure, h: &ConeExpr, r: usize) -> Result<CosetPoset> {
    let ball = g.ball(r);
    check_subgroup(g, h, &ball)?;
    let mut report = Report::new(format!("quotient of {} by H on ball({r})", g.name()));
    let normal = check_normal(g, h, &ball);
    if !normal.passed() {
        return Err(Error::Precondition(format!("H is not normal: {}", normal.witnesses[0])));
    }
    report.push(normal);
    let convex = check_completely_convex(g, c, h, r)?;
    if !convex.passed() {
        return Err(Error::Precondition(format!("H is not completely convex: {}", convex.witnesses[0])));
    }
    report.push(convex);

    let hball = g.ball(2 * r);
    let hs: Vec<Word> = hball.elements.iter().filter(|w| h.eval(g, w)).cloned().collect();

    // Cosets met by the ball, with all of their in-ball members.
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, w) in ball.elements.iter().enumerate() {
        let found = members.iter_mut().find(|m| h.eval(g, &g.multiply(&g.invert(&ball.elements[m[0]]), w)));
        match found {
            Some(m) => m.push(i),
            None => members.push(vec![i]),
        }
    }
    let n = members.len();
    let reps: Vec<Word> = members.iter().map(|m| ball.elements[m[0]].clone()).collect();
    let labels: Vec<String> = reps.iter().map(|w| format!("{}H", g.format(w))).collect();
    let mut rel = vec![None; n * n];
    let mut unique = Check::new("coset relation unique");
    let mut indep = Check::new("representative independence");
    for i in 0..n {
        rel[i * n + i] = Some(Relation::Eq);
        for j in 0..n {
            if i == j {
                continue;
            }
            let found = coset_relation(g, c, &reps[i], &reps[j], &hs)?;
            if found.len() == 1 {
                unique.examined += 1;
                rel[i * n + j] = found.into_iter().next();
            } else {
                unique.expect(false, || format!("({}, {}) relates as {found:?}", labels[i], labels[j]));
                continue;
            }
            for &x in &members[i] {
                for &y in &members[j] {
                    let alt = coset_relation(g, c, &ball.elements[x], &ball.elements[y], &hs)?;
                    indep.expect(alt.len() == 1 && alt.contains(&rel[i * n + j].unwrap()), || {
                        format!(
                            "({}, {}) via ({}, {}) gives {alt:?}",
                            labels[i],
                            labels[j],
                            g.format(&ball.elements[x]),
                            g.format(&ball.elements[y])
                        )
                    });
                }
            }
        }
    }
    report.push(unique);
    report.push(indep);
    report.push(check_coset_properties(&labels, &rel));

    let cp = CosetPoset { representatives: reps, labels, rel, report };
    let mut report = cp.report.clone();
    match cp.to_poset() {
        Ok(qp) => {
            report.push(check_coset_between(g, c, &cp, &qp, &hs)?);
            for chk in full_suite(&qp).checks {
                report.push(chk);
            }
        }
        Err(e) => report.note(format!("quotient poset not built: {e}")),
    }
    Ok(CosetPoset { report, ..cp })
}

/// The four coset properties, exhaustively over determined triples:
/// 1. `g₁H < g₂H < g₃H ⇒ g₁H < g₃H`;
/// 2. `g₁H ~u g₂H`, `g₂H ~l g₃H` ⇒ `g₁H < g₃H`;
/// 3. `g₁H ~u g₂H`, `g₃H < g₂H` ⇒ `g₁H ~u g₃H`;
/// 4. `g₁H ~l g₂H`, `g₂H < g₃H` ⇒ `g₁H ~l g₃H`.
pub fn check_coset_properties(labels: &[String], rel: &[Option<Relation>]) -> Check {
    use Relation::*;
    let n = labels.len();
    let mut c = Check::new("coset properties (1)-(4)");
    let r = |a: usize, b: usize| rel[a * n + b];
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let (ab, bd, db) = (r(a, b), r(b, d), r(d, b));
                let want = match (ab, bd, db) {
                    (Some(Lt), Some(Lt), _) => Some((1, Lt)),
                    (Some(SimU), Some(SimL), _) => Some((2, Lt)),
                    (Some(SimU), _, Some(Lt)) => Some((3, SimU)),
                    (Some(SimL), Some(Lt), _) => Some((4, SimL)),
                    _ => None,
                };
                if let Some((k, w)) = want {
                    match r(a, d) {
                        None => c.undetermined += 1,
                        Some(got) => c.expect(got == w, || {
                            format!("property ({k}) on ({}, {}, {}): got {got}", labels[a], labels[b], labels[d])
                        }),
                    }
                }
            }
        }
    }
    c
}

/// `gH ∈ B_{fH,kH}` ⇒ `gh' ∈ B_{f,kh}` for some `h, h' ∈ H` in the search
/// window; triples without a witness count as undetermined.
fn check_coset_between(
    g: &GroupModel,
    c: &ConeStructure,
    cp: &CosetPoset,
    qp: &ExtendedPoset,
    hs: &[Word],
) -> Result<Check> {
    const SAMPLE: usize = 400;
    let n = cp.len();
    let mut check = Check::new("coset betweenness lifts");
    let short: Vec<&Word> = hs.iter().take(9).collect();
    let mut seen = 0;
    'outer: for f in 0..n {
        for k in 0..n {
            if f == k {
                continue;
            }
            for x in 0..n {
                if x == f || x == k || !between_raw(qp, f, x, k) {
                    continue;
                }
                seen += 1;
                if seen > SAMPLE {
                    break 'outer;
                }
                let mut ok = false;
                'search: for h in &short {
                    let kh = g.multiply(&cp.representatives[k], h);
                    for h2 in &short {
                        let gh = g.multiply(&cp.representatives[x], h2);
                        if group_between(g, c, &cp.representatives[f], &gh, &kh)? {
                            ok = true;
                            break 'search;
                        }
                    }
                }
                if ok {
                    check.examined += 1;
                } else {
                    check.undetermined += 1;
                }
            }
        }
    }
    Ok(check)
}
