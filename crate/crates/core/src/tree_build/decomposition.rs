use serde::Serialize;

use super::context::BuildContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StageCase {
    /// `G_n ∩ B_{n+1} = {x_{n+1}}`.
    Case1,
    /// `G_n ∩ B_{n+1}` half open and totally ordered. Needs an infinite
    /// chain without a greatest element, so never produced on a ball.
    Case2,
}

/// How the raw intersection looked before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntersectionForm {
    Singleton,
    /// A closed initial segment `B_{x,z}`; the pair was replaced by `(z, y)`.
    ClosedInitial { x: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionStage {
    pub x: usize,
    pub y: usize,
    pub case: StageCase,
    pub form: IntersectionForm,
    /// `B_{n+1} − G_n`, in `⪯` order.
    pub added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetweenDecomposition {
    pub root: usize,
    pub pairs: Vec<(usize, usize)>,
    pub stages: Vec<DecompositionStage>,
    pub normalized: bool,
    /// Pairs dropped because `B ⊂ G_n`.
    pub dropped: usize,
}

impl BetweenDecomposition {
    pub fn case_tags(&self) -> Vec<StageCase> {
        self.stages.iter().map(|s| s.case).collect()
    }
}

/// Prepends `B_{x_1,x_i}` before each pair, drops pairs already covered,
/// and reduces every intersection to a single point.
pub fn normalize_decomposition(ctx: &BuildContext, pairs: &[(usize, usize)]) -> Result<BetweenDecomposition> {
    let n = ctx.len();
    let Some(&(root, _)) = pairs.first() else {
        return Err(Error::Precondition("empty decomposition".into()));
    };
    for &(x, y) in pairs {
        if x >= n || y >= n || x == y {
            return Err(Error::Precondition(format!("bad pair ({x}, {y})")));
        }
    }
    let mut expanded = Vec::new();
    for &(x, y) in pairs {
        if x != root {
            expanded.push((root, x));
        }
        expanded.push((x, y));
    }
    let mut covered = vec![false; n];
    covered[root] = true;
    let mut stages = Vec::new();
    let mut dropped = 0;
    for (mut x, mut y) in expanded {
        let bits = ctx.between_bits(x, y);
        if bits.ones().all(|g| covered[g]) {
            dropped += 1;
            continue;
        }
        if !covered[x] {
            if !covered[y] {
                return Err(Error::Invariant(format!("stage ({x}, {y}) does not meet G_n")));
            }
            std::mem::swap(&mut x, &mut y);
        }
        let chain = ctx.between(x, y)?;
        let inside = chain.members.iter().take_while(|&&g| covered[g]).count();
        if chain.members.iter().skip(inside).any(|&g| covered[g]) {
            return Err(Error::Invariant(format!(
                "G_n ∩ B_({}, {}) is not an initial segment",
                ctx.base().label(x),
                ctx.base().label(y)
            )));
        }
        let z = chain.members[inside - 1];
        let form = if z == x {
            IntersectionForm::Singleton
        } else {
            let initial: Vec<usize> = ctx.between_bits(x, z).ones().collect();
            let mut seg = chain.members[..inside].to_vec();
            seg.sort_unstable();
            if initial != seg {
                // Would need Case 2.
                return Err(Error::Invariant(format!(
                    "G_n ∩ B_({}, {}) is not a closed initial segment",
                    ctx.base().label(x),
                    ctx.base().label(y)
                )));
            }
            IntersectionForm::ClosedInitial { x }
        };
        let chain = ctx.between(z, y)?;
        let added: Vec<usize> = chain.members.iter().copied().filter(|&g| !covered[g]).collect();
        if chain.members.iter().filter(|&&g| covered[g]).count() != 1 {
            return Err(Error::Invariant("normalized intersection is not a single point".into()));
        }
        for &g in &added {
            covered[g] = true;
        }
        stages.push(DecompositionStage { x: z, y, case: StageCase::Case1, form, added });
    }
    let uncovered: Vec<&str> = (0..n).filter(|&g| !covered[g]).map(|g| ctx.base().label(g)).collect();
    if !uncovered.is_empty() {
        return Err(Error::Precondition(format!("pairs do not cover the ball: {}", uncovered.join(", "))));
    }
    Ok(BetweenDecomposition { root, pairs: pairs.to_vec(), stages, normalized: true, dropped })
}

/// Pairs `(x, y)` with `x` already covered, each chosen to add the most new
/// elements (ties to the smallest ids), until the ball is covered.
pub fn greedy_pairs(ctx: &BuildContext, root: usize) -> Vec<(usize, usize)> {
    let n = ctx.len();
    let mut covered = vec![false; n];
    covered[root] = true;
    let mut pairs = Vec::new();
    while covered.iter().any(|c| !c) {
        let mut best: Option<(usize, usize, usize)> = None;
        for x in (0..n).filter(|&x| covered[x]) {
            for y in (0..n).filter(|&y| !covered[y]) {
                let gain = ctx.between_bits(x, y).ones().filter(|&g| !covered[g]).count();
                if best.is_none_or(|b| gain > b.0) {
                    best = Some((gain, x, y));
                }
            }
        }
        let (_, x, y) = best.expect("an uncovered element exists");
        for g in ctx.between_bits(x, y).ones() {
            covered[g] = true;
        }
        pairs.push((x, y));
    }
    pairs
}

/// `(x_1, g)` for every other `g`, in ball (shortlex) order.
pub fn shortlex_pairs(ctx: &BuildContext, root: usize) -> Vec<(usize, usize)> {
    (0..ctx.len()).filter(|&g| g != root).map(|g| (root, g)).collect()
}
