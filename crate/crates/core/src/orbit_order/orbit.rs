use serde::Serialize;

use super::action::TreeAction;
use super::manifold::manifold_order_table;
use crate::error::{Error, Result};
use crate::group_order::{ConeExpr, GroupModel, Word};
use crate::order_tree::{Point, TreeGraph};
use crate::poset_core::{ExtendedPoset, Relation};

/// Relations among orbit points of a ball. Pairs whose tag needs a bound
/// outside the finite structure stay `None` and are listed.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitPoset {
    pub labels: Vec<String>,
    pub elements: Vec<Word>,
    pub rel: Vec<Option<Relation>>,
    pub undetermined: Vec<(usize, usize)>,
    /// The full poset, when every pair is determined.
    #[serde(skip)]
    pub poset: Option<ExtendedPoset>,
}

impl OrbitPoset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn relation(&self, i: usize, j: usize) -> Option<Relation> {
        self.rel[i * self.len() + j]
    }

    pub fn pair_count(&self) -> usize {
        self.len() * self.len().saturating_sub(1) / 2
    }

    fn finish(labels: Vec<String>, elements: Vec<Word>, rel: Vec<Option<Relation>>) -> Result<Self> {
        let n = labels.len();
        let undetermined: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| rel[i * n + j].is_none()).collect();
        let poset = if undetermined.is_empty() {
            Some(ExtendedPoset::new(labels.clone(), |i, j| rel[i * n + j].expect("determined"))?)
        } else {
            None
        };
        Ok(OrbitPoset { labels, elements, rel, undetermined, poset })
    }
}

/// The order of given orbit points on a branchless manifold.
pub fn orbit_poset_from_points(g: &TreeGraph, group: &GroupModel, elements: &[Word], points: &[Point]) -> Result<OrbitPoset> {
    let rel = manifold_order_table(g, points)?;
    let labels = elements.iter().map(|w| group.format(w)).collect();
    OrbitPoset::finish(labels, elements.to_vec(), rel)
}

fn orbit_points(a: &TreeAction, x0: Point, r: usize) -> Result<(Vec<Word>, Vec<Point>)> {
    let ball = a.group.ball(r);
    let mut els = Vec::new();
    let mut pts = Vec::new();
    for w in &ball.elements {
        let p = a.act(w, x0).ok_or_else(|| Error::Precondition(format!("{} · x0 leaves the truncation", a.group.format(w))))?;
        els.push(w.clone());
        pts.push(p);
    }
    Ok((els, pts))
}

/// `g ↦ g · x0` identifies the ball with part of the orbit; the order is
/// the manifold order of the blow-up.
pub fn orbit_poset(a: &TreeAction, x0: Point, r: usize) -> Result<OrbitPoset> {
    let (els, pts) = orbit_points(a, x0, r)?;
    let e = a.group.identity();
    for (w, p) in els.iter().zip(&pts) {
        if *w != e && *p == x0 {
            return Err(Error::Stabilizer(a.group.format(w)));
        }
    }
    orbit_poset_from_points(&a.manifold.graph, &a.group, &els, &pts)
}

/// With a nontrivial stabilizer `H`: `g₁ < g₂` by the coset order when
/// `g₁⁻¹g₂ ∉ H`, otherwise by `positive` on `H`.
pub fn stabilizer_extension_order(a: &TreeAction, x0: Point, r: usize, positive: &ConeExpr) -> Result<OrbitPoset> {
    let g = &a.group;
    let (els, pts) = orbit_points(a, x0, r)?;
    let e = g.identity();
    let stab: Vec<&Word> = els.iter().zip(&pts).filter(|(_, p)| **p == x0).map(|(w, _)| w).collect();
    for h in &stab {
        if **h == e {
            continue;
        }
        let (up, down) = (positive.eval(g, h), positive.eval(g, &g.invert(h)));
        if up == down {
            return Err(Error::Precondition(format!("stabilizer order is not total at {}", g.format(h))));
        }
        for k in &stab {
            let hk = g.multiply(h, k);
            if stab.contains(&&hk) && up && positive.eval(g, k) && !positive.eval(g, &hk) {
                return Err(Error::Precondition(format!(
                    "stabilizer order is not left-invariant: {} · {}",
                    g.format(h),
                    g.format(k)
                )));
            }
        }
    }
    let n = els.len();
    let mut rel = manifold_order_table(&a.manifold.graph, &pts)?;
    for i in 0..n {
        for j in 0..n {
            if i != j && pts[i] == pts[j] {
                let q = g.multiply(&g.invert(&els[i]), &els[j]);
                rel[i * n + j] = Some(if positive.eval(g, &q) { Relation::Lt } else { Relation::Gt });
            }
        }
    }
    let labels = els.iter().map(|w| g.format(w)).collect();
    OrbitPoset::finish(labels, els, rel)
}
