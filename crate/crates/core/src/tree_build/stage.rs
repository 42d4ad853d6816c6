use std::collections::BTreeMap;

use serde::Serialize;

use super::context::BuildContext;
use super::decomposition::{DecompositionStage, StageCase};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::group_order::Tag;

/// A point of `T_n` before quotienting: an interval and a coordinate on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TreePoint {
    pub interval: usize,
    pub at: Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub stage: usize,
}

/// The left end of `interval` is identified with `onto`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub interval: usize,
    pub onto: TreePoint,
    /// The augmented element labelling the glued point in `T_n`.
    pub via: usize,
    pub truncated_limit: bool,
}

/// `T_n` as intervals `I_0..I_n` with gluings `R_1..R_n` and the labelling
/// `ν_n` of `G_n⁺` (augmented ids).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledTree {
    pub intervals: Vec<Interval>,
    pub gluings: Vec<Gluing>,
    pub nu: BTreeMap<usize, TreePoint>,
    pub stage: usize,
    /// `G_n` as base ids.
    pub members: Vec<usize>,
}

impl LabeledTree {
    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(&g)
    }
}

/// `T_0 = [0, 1]` with `ν(x_-) = 0`, `ν(x) = 1/2`, `ν(x_+) = 1`.
pub fn base_stage(ctx: &BuildContext, x: usize) -> LabeledTree {
    let mut nu = BTreeMap::new();
    for (tag, at) in [(Tag::Minus, Dyadic::ZERO), (Tag::Plain, Dyadic::HALF), (Tag::Plus, Dyadic::ONE)] {
        nu.insert(ctx.aug(x, tag), TreePoint { interval: 0, at });
    }
    LabeledTree {
        intervals: vec![Interval { lo: Dyadic::ZERO, hi: Dyadic::ONE, stage: 0 }],
        gluings: Vec::new(),
        nu,
        stage: 0,
        members: vec![x],
    }
}

/// Lays a finite chain of `m ≥ 2` points on `[lo, lo + 1]`: the ends at
/// the integers, the others in enumeration order, each at the midpoint of
/// the gap it falls into.
fn lay_chain(lo: Dyadic, keys: &[usize]) -> Vec<Dyadic> {
    let m = keys.len();
    let mut pos: Vec<Option<Dyadic>> = vec![None; m];
    pos[0] = Some(lo);
    pos[m - 1] = Some(lo + Dyadic::ONE);
    let mut order: Vec<usize> = (1..m - 1).collect();
    order.sort_by_key(|&i| keys[i]);
    for i in order {
        let left = (0..i).rev().find_map(|j| pos[j]).expect("left end is placed");
        let right = (i + 1..m).find_map(|j| pos[j]).expect("right end is placed");
        pos[i] = Some(left.midpoint(right));
    }
    pos.into_iter().map(|p| p.expect("all placed")).collect()
}

/// One labelled copy of `[0, k]` for `B_{x,y}`: augmented `O`-classes with
/// `R`-equivalent neighbours merged, one class per unit interval.
fn label_between(ctx: &BuildContext, x: usize, y: usize) -> Result<Vec<(Vec<usize>, Dyadic)>> {
    let chain = ctx.between(x, y)?;
    let mut points: Vec<(Vec<usize>, Dyadic)> = Vec::new();
    for (i, class) in chain.classes.iter().enumerate() {
        let g1 = class[0];
        let increasing = if g1 != y {
            ctx.leaving_tag(g1, y)
                .ok_or_else(|| Error::Invariant(format!("{} leaves towards {} by both or no tags", ctx.base().label(g1), ctx.base().label(y))))?
                == Tag::Plus
        } else {
            let b = ctx.plus_between(ctx.aug(x, Tag::Plain), ctx.aug(y, Tag::Plain));
            b.contains(ctx.aug(y, Tag::Minus))
        };
        if class.len() > 1 && ctx.base().rel(class[0], class[1]).is_comparable() {
            let up = ctx.base().rel(class[0], class[1]) == crate::poset_core::Relation::Lt;
            if up != increasing {
                return Err(Error::Invariant("class direction disagrees with its tags".into()));
            }
        }
        let tags = if increasing { [Tag::Minus, Tag::Plain, Tag::Plus] } else { [Tag::Plus, Tag::Plain, Tag::Minus] };
        let along: Vec<usize> = class.iter().flat_map(|&g| tags.map(|t| ctx.aug(g, t))).collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for a in along {
            match groups.last_mut() {
                Some(last) if ctx.r_equiv(last[0], a) => last.push(a),
                _ => groups.push(vec![a]),
            }
        }
        let keys: Vec<usize> = groups.iter().map(|g| *g.iter().min().expect("nonempty")).collect();
        let coords = lay_chain(Dyadic::int(i as i64), &keys);
        for (j, (grp, c)) in groups.into_iter().zip(coords).enumerate() {
            // Class ends meet their neighbours at the shared integer.
            if j == 0 && i > 0 {
                points.last_mut().expect("previous class").0.extend(grp);
            } else {
                points.push((grp, c));
            }
        }
    }
    Ok(points)
}

/// Adds `B_{x,y}` to `T_n` (Case 1): the part of `[0, k]` before
/// `ν(x_s)` is cut away and `ν(x_s)` glued to its old position.
pub fn build_stage(ctx: &BuildContext, state: &LabeledTree, stage: &DecompositionStage) -> Result<LabeledTree> {
    if stage.case != StageCase::Case1 {
        return Err(Error::Precondition("only normalized Case 1 stages can be built on a ball".into()));
    }
    let (x, y) = (stage.x, stage.y);
    let bits = ctx.between_bits(x, y);
    let met: Vec<usize> = bits.ones().filter(|g| state.contains(*g)).collect();
    if met != [x] {
        return Err(Error::Precondition(format!(
            "decomposition not normalized: G_n ∩ B_({}, {}) has {} elements",
            ctx.base().label(x),
            ctx.base().label(y),
            met.len()
        )));
    }
    let points = label_between(ctx, x, y)?;
    let s = ctx.leaving_tag(x, y).ok_or_else(|| Error::Invariant("x has no leaving tag".into()))?;
    let xs = ctx.aug(x, s);
    let cut = points.iter().find(|(grp, _)| grp.contains(&xs)).map(|p| p.1).expect("x_s is laid out");
    let onto = *state.nu.get(&xs).ok_or_else(|| Error::Invariant("ν_n(x_s) is missing".into()))?;
    let k = points.last().expect("nonempty").1;
    let mut next = state.clone();
    let id = next.intervals.len();
    next.intervals.push(Interval { lo: cut, hi: k, stage: state.stage + 1 });
    next.gluings.push(Gluing { interval: id, onto, via: xs, truncated_limit: false });
    for (grp, c) in &points {
        if *c < cut {
            continue;
        }
        for &a in grp {
            next.nu.entry(a).or_insert(TreePoint { interval: id, at: *c });
        }
    }
    next.members.extend(stage.added.iter().copied());
    next.stage += 1;
    Ok(next)
}

/// `T_0`, then one stage per decomposition entry (at most `stages` of
/// them). Returns every stage built.
pub fn build_stages(ctx: &BuildContext, root: usize, stages: &[DecompositionStage], budget: usize) -> Result<Vec<LabeledTree>> {
    let mut out = vec![base_stage(ctx, root)];
    for st in stages.iter().take(budget) {
        let next = build_stage(ctx, out.last().expect("nonempty"), st)?;
        out.push(next);
    }
    Ok(out)
}
