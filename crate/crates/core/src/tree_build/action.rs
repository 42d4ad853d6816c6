use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::context::BuildContext;
use super::orient::OrderTree;
use super::verify::path_positions;
use crate::group_order::{Ball, GroupModel, Tag};
use crate::order_tree::Point;
use crate::report::Check;

/// `ν(h_t) ↦ ν((gh)_t)` on the labelled points of a built stage.
#[derive(Debug, Clone, Serialize)]
pub struct LabelAction {
    pub element: String,
    /// Augmented id pairs `(h_t, (gh)_t)` with both labelled.
    pub moved: Vec<(usize, usize)>,
    /// Labelled `h_t` whose image is not labelled (or leaves the ball).
    pub escaped: Vec<usize>,
    pub well_defined: Check,
    pub equivariance: Check,
}

impl LabelAction {
    pub fn image(&self, a: usize) -> Option<usize> {
        self.moved.iter().find(|m| m.0 == a).map(|m| m.1)
    }

    pub fn passed(&self) -> bool {
        self.well_defined.passed() && self.equivariance.passed()
    }
}

/// The action of `g` on labels. Checks that labels sharing a point keep
/// sharing one, and `h ∈ [ν(f), ν(k)] ⟺ gh ∈ [ν(gf), ν(gk)]` for group
/// labels.
pub fn act_on_labels(group: &GroupModel, ball: &Ball, ctx: &BuildContext, tree: &OrderTree, g: &[i64]) -> LabelAction {
    let mut moved = Vec::new();
    let mut escaped = Vec::new();
    let mut base_image: BTreeMap<usize, usize> = BTreeMap::new();
    for &a in tree.points.keys() {
        let h = a / 3;
        let gh = group.multiply(g, &ball.elements[h]);
        match ball.index(&gh) {
            Some(k) if tree.points.contains_key(&ctx.aug(k, Tag::Plain)) => {
                moved.push((a, ctx.aug(k, ctx.gp.element(a).tag)));
                base_image.insert(h, k);
            }
            _ => escaped.push(a),
        }
    }
    let mut well_defined = Check::new("labels sharing a point keep sharing one");
    let img: BTreeMap<usize, usize> = moved.iter().copied().collect();
    let keys: Vec<usize> = img.keys().copied().collect();
    for (i, &a) in keys.iter().enumerate() {
        for &b in &keys[i + 1..] {
            if tree.points[&a] == tree.points[&b] {
                well_defined.expect(tree.points[&img[&a]] == tree.points[&img[&b]], || {
                    format!("{} = {} but images differ", ctx.plus_label(a), ctx.plus_label(b))
                });
            }
        }
    }
    let mut equivariance = Check::new("h ∈ [ν(f), ν(k)] ⟺ gh ∈ [ν(gf), ν(gk)]");
    let plain: BTreeMap<usize, Point> =
        base_image.keys().map(|&h| (h, tree.points[&ctx.aug(h, Tag::Plain)])).collect();
    let on = |f: usize, k: usize| -> Option<BTreeSet<usize>> {
        let all: BTreeMap<usize, Point> =
            plain.keys().chain(base_image.values()).map(|&h| (h, tree.points[&ctx.aug(h, Tag::Plain)])).collect();
        path_positions(&tree.graph, all[&f], all[&k], &all).ok().map(|m| m.into_keys().collect())
    };
    let hs: Vec<usize> = plain.keys().copied().collect();
    for (i, &f) in hs.iter().enumerate() {
        for &k in &hs[i + 1..] {
            let (Some(before), Some(after)) = (on(f, k), on(base_image[&f], base_image[&k])) else {
                equivariance.skipped += 1;
                continue;
            };
            for &h in &hs {
                equivariance.expect(before.contains(&h) == after.contains(&base_image[&h]), || {
                    format!(
                        "{} vs [{}, {}]",
                        ctx.base().label(h),
                        ctx.base().label(f),
                        ctx.base().label(k)
                    )
                });
            }
        }
    }
    LabelAction { element: group.format(g), moved, escaped, well_defined, equivariance }
}
