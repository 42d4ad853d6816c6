use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::group::{Ball, GroupModel, Word};
use crate::error::{Error, Result};
use crate::poset_core::{ExtendedPoset, Relation};
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl CmpOp {
    fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }
}

/// A membership predicate over normal-form components.
///
/// Component tests on a missing index are false (free-group words have
/// variable length).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConeExpr {
    True,
    False,
    Identity,
    Not { expr: Box<ConeExpr> },
    All { of: Vec<ConeExpr> },
    Any { of: Vec<ConeExpr> },
    Cmp { index: usize, op: CmpOp, value: i64 },
    Parity { index: usize, modulus: i64, residue: i64 },
    /// First nonzero component is positive.
    LexPositive,
    /// Leading coefficient of the Magnus expansion is positive (free groups).
    MagnusPositive,
}

impl ConeExpr {
    pub fn cmp(index: usize, op: CmpOp, value: i64) -> Self {
        ConeExpr::Cmp { index, op, value }
    }

    pub fn all(of: impl IntoIterator<Item = ConeExpr>) -> Self {
        ConeExpr::All { of: of.into_iter().collect() }
    }

    pub fn any(of: impl IntoIterator<Item = ConeExpr>) -> Self {
        ConeExpr::Any { of: of.into_iter().collect() }
    }

    pub fn not(e: ConeExpr) -> Self {
        ConeExpr::Not { expr: Box::new(e) }
    }

    pub fn eval(&self, g: &GroupModel, w: &[i64]) -> bool {
        match self {
            ConeExpr::True => true,
            ConeExpr::False => false,
            ConeExpr::Identity => w == g.identity().as_slice(),
            ConeExpr::Not { expr } => !expr.eval(g, w),
            ConeExpr::All { of } => of.iter().all(|e| e.eval(g, w)),
            ConeExpr::Any { of } => of.iter().any(|e| e.eval(g, w)),
            ConeExpr::Cmp { index, op, value } => w.get(*index).is_some_and(|&a| op.holds(a, *value)),
            ConeExpr::Parity { index, modulus, residue } => {
                *modulus != 0 && w.get(*index).is_some_and(|&a| a.rem_euclid(*modulus) == residue.rem_euclid(*modulus))
            }
            ConeExpr::LexPositive => w.iter().find(|&&a| a != 0).is_some_and(|&a| a > 0),
            ConeExpr::MagnusPositive => magnus_sign(w) > 0,
        }
    }
}

/// Coefficient of the monomial `X_{m_1} ⋯ X_{m_d}` in the Magnus expansion
/// `x_i ↦ 1 + X_i`, `x_i⁻¹ ↦ 1 − X_i + X_i² − ⋯`.
pub fn magnus_coefficient(word: &[i64], mono: &[i64]) -> i128 {
    let d = mono.len();
    let mut dp = vec![0i128; d + 1];
    dp[0] = 1;
    for &l in word {
        let g = l.abs();
        let mut next = dp.clone();
        for q in 0..d {
            if dp[q] == 0 {
                continue;
            }
            let mut k = 1;
            while q + k <= d && mono[q + k - 1] == g {
                let c = if l > 0 {
                    i128::from(k == 1)
                } else if k % 2 == 0 {
                    1
                } else {
                    -1
                };
                next[q + k] += dp[q] * c;
                if l > 0 {
                    break;
                }
                k += 1;
            }
        }
        dp = next;
    }
    dp[d]
}

/// Sign of the first nonzero coefficient of `μ(w) − 1` in degree-then-lex
/// order of monomials (`X_1 < X_2 < ⋯`). Zero only for the empty word.
pub fn magnus_sign(word: &[i64]) -> i32 {
    if word.is_empty() {
        return 0;
    }
    let mut gens: Vec<i64> = word.iter().map(|l| l.abs()).collect();
    gens.sort_unstable();
    gens.dedup();
    // A nontrivial reduced word has a nonzero term of degree ≤ its length.
    let k = gens.len();
    for d in 1..=word.len() {
        let mut mono = vec![0i64; d];
        // Big-endian base-k counting enumerates monomials in lex order.
        for code in 0..k.pow(d as u32) {
            let mut c = code;
            for slot in mono.iter_mut().rev() {
                *slot = gens[c % k];
                c /= k;
            }
            let coeff = magnus_coefficient(word, &mono);
            if coeff != 0 {
                return if coeff > 0 { 1 } else { -1 };
            }
        }
    }
    unreachable!("Magnus expansion of a nontrivial word vanished below its length")
}

/// Membership predicates for `𝒫`, `𝒰`, `ℒ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeStructure {
    #[serde(rename = "P")]
    pub p: ConeExpr,
    #[serde(rename = "U")]
    pub u: ConeExpr,
    #[serde(rename = "L")]
    pub l: ConeExpr,
}

/// Membership of one element: `[e, 𝒫, 𝒫⁻¹, 𝒰, ℒ]`.
pub type Flags = [bool; 5];

const PART_NAMES: [&str; 5] = ["{e}", "P", "P^-1", "U", "L"];

impl ConeStructure {
    pub fn flags(&self, g: &GroupModel, w: &[i64]) -> Flags {
        [
            w == g.identity().as_slice(),
            self.p.eval(g, w),
            self.p.eval(g, &g.invert(w)),
            self.u.eval(g, w),
            self.l.eval(g, w),
        ]
    }
}

fn relation_of(g: &GroupModel, w: &[i64], f: Flags) -> Result<Relation> {
    let hits: Vec<usize> = (0..5).filter(|&i| f[i]).collect();
    if hits.len() != 1 {
        let detail = if hits.is_empty() {
            "in no part".to_string()
        } else {
            format!("in {}", hits.iter().map(|&i| PART_NAMES[i]).collect::<Vec<_>>().join(" and "))
        };
        return Err(Error::ConePartition { element: g.format(w), detail });
    }
    Ok([Relation::Eq, Relation::Lt, Relation::Gt, Relation::SimU, Relation::SimL][hits[0]])
}

/// `g < h` iff `g⁻¹h ∈ 𝒫`, and so on for the other parts.
pub fn classify_group(g: &GroupModel, c: &ConeStructure, x: &[i64], y: &[i64]) -> Result<Relation> {
    let k = g.multiply(&g.invert(x), y);
    relation_of(g, &k, c.flags(g, &k))
}

fn product_checks(
    g: &GroupModel,
    ball: &Ball,
    flags: &[Flags],
    name: &str,
    a: usize,
    b: usize,
    want: usize,
) -> Check {
    let xs: Vec<usize> = (0..ball.len()).filter(|&i| flags[i][a]).collect();
    let ys: Vec<usize> = (0..ball.len()).filter(|&i| flags[i][b]).collect();
    let parts: Vec<Check> = xs
        .par_iter()
        .map(|&x| {
            let mut c = Check::new(name);
            let wx = &ball.elements[x];
            for &y in &ys {
                let wy = &ball.elements[y];
                if g.free_product_len(wx, wy).is_some_and(|l| l > ball.radius) {
                    c.skipped += 1;
                    continue;
                }
                let p = g.multiply(wx, wy);
                match ball.index(&p) {
                    None => c.skipped += 1,
                    Some(k) => c.expect(flags[k][want], || {
                        format!("({}, {}) → {}", g.format(wx), g.format(wy), g.format(&p))
                    }),
                }
            }
            c
        })
        .collect();
    let mut total = Check::new(name);
    for p in parts {
        total.merge(p);
    }
    total
}

/// The six cone conditions on `ball(r)`; products leaving the ball are
/// skipped and counted.
pub fn verify_cone_axioms(g: &GroupModel, c: &ConeStructure, r: usize) -> Report {
    let ball = g.ball(r);
    let flags: Vec<Flags> = ball.elements.par_iter().map(|w| c.flags(g, w)).collect();
    let mut rep = Report::new(format!("cone axioms on {} ball({r})", g.name()));
    let mut c1 = Check::new("(1) P∩P⁻¹=∅, U⁻¹=U, L⁻¹=L");
    for (w, f) in ball.elements.iter().zip(&flags) {
        let inv = g.invert(w);
        c1.expect(!(f[1] && f[2]), || format!("{} ∈ P ∩ P⁻¹", g.format(w)));
        c1.expect(f[3] == c.u.eval(g, &inv), || format!("U not symmetric at {}", g.format(w)));
        c1.expect(f[4] == c.l.eval(g, &inv), || format!("L not symmetric at {}", g.format(w)));
    }
    rep.push(c1);
    rep.push(product_checks(g, &ball, &flags, "(2) P·P ⊂ P", 1, 1, 1));
    rep.push(product_checks(g, &ball, &flags, "(3) L·P ⊂ L", 4, 1, 4));
    rep.push(product_checks(g, &ball, &flags, "(4) P·U ⊂ U", 1, 3, 3));
    rep.push(product_checks(g, &ball, &flags, "(5) U·L ⊂ P", 3, 4, 1));
    let mut c6 = Check::new("(6) disjoint cover");
    for (w, f) in ball.elements.iter().zip(&flags) {
        c6.expect(relation_of(g, w, *f).is_ok(), || {
            let parts: Vec<&str> = (0..5).filter(|&i| f[i]).map(|i| PART_NAMES[i]).collect();
            format!("{} lies in [{}]", g.format(w), parts.join(", "))
        });
    }
    rep.push(c6);
    rep
}

/// The order restricted to `ball(r)`, with the ball it was built on.
pub fn induced_ball_poset(g: &GroupModel, c: &ConeStructure, r: usize) -> Result<(ExtendedPoset, Ball)> {
    let ball = g.ball(r);
    let p = poset_on(g, c, &ball.elements)?;
    Ok((p, ball))
}

/// The order restricted to an arbitrary finite list of elements.
pub fn poset_on(g: &GroupModel, c: &ConeStructure, elements: &[Word]) -> Result<ExtendedPoset> {
    let n = elements.len();
    let table: Vec<Relation> = (0..n * n)
        .into_par_iter()
        .map(|k| classify_group(g, c, &elements[k / n], &elements[k % n]))
        .collect::<Result<_>>()?;
    ExtendedPoset::new(elements.iter().map(|w| g.format(w)).collect(), |a, b| table[a * n + b])
}

fn translators(g: &GroupModel, ball: &Ball) -> Vec<Word> {
    if ball.len() <= 200 {
        ball.elements.clone()
    } else {
        let mut v = g.generators();
        v.extend(g.generators().iter().map(|x| g.invert(x)));
        v
    }
}

/// `rel(g, h) = rel(fg, fh)` whenever all four lie in the ball. Every ball
/// element is used as `f` on small balls, the generators and their inverses
/// otherwise.
pub fn check_left_invariance(g: &GroupModel, p: &ExtendedPoset, ball: &Ball) -> Check {
    let fs = translators(g, ball);
    let n = ball.len();
    let parts: Vec<Check> = fs
        .par_iter()
        .map(|f| {
            let moved: Vec<Option<usize>> = ball.elements.iter().map(|w| ball.index(&g.multiply(f, w))).collect();
            let mut c = Check::new("left invariance");
            for a in 0..n {
                for b in 0..n {
                    match (moved[a], moved[b]) {
                        (Some(fa), Some(fb)) => c.expect(p.rel(a, b) == p.rel(fa, fb), || {
                            format!(
                                "f = {}: {} {} {} but {} {} {}",
                                g.format(f),
                                p.label(a),
                                p.rel(a, b),
                                p.label(b),
                                p.label(fa),
                                p.rel(fa, fb),
                                p.label(fb)
                            )
                        }),
                        _ => c.skipped += 1,
                    }
                }
            }
            c
        })
        .collect();
    let mut total = Check::new("left invariance");
    for c in parts {
        total.merge(c);
    }
    total
}

/// `h ∈ B_{f,k} ⟺ gh ∈ B_{gf,gk}` on triples inside the ball.
pub fn check_between_equivariance(g: &GroupModel, p: &ExtendedPoset, ball: &Ball) -> Check {
    let n = ball.len();
    let fs = translators(g, ball);
    let limit = 60usize;
    let ids: Vec<usize> = (0..n.min(limit)).collect();
    let parts: Vec<Check> = fs
        .par_iter()
        .map(|f| {
            let moved: Vec<Option<usize>> = ball.elements.iter().map(|w| ball.index(&g.multiply(f, w))).collect();
            let mut c = Check::new("betweenness equivariance");
            for &a in &ids {
                for &b in &ids {
                    for &x in &ids {
                        if a == x {
                            continue;
                        }
                        match (moved[a], moved[b], moved[x]) {
                            (Some(fa), Some(fb), Some(fx)) => {
                                let before = crate::poset_core::between_raw(p, a, b, x);
                                let after = crate::poset_core::between_raw(p, fa, fb, fx);
                                c.expect(before == after, || {
                                    format!("f = {}: {} between {} and {} is {before}", g.format(f), p.label(b), p.label(a), p.label(x))
                                })
                            }
                            _ => c.skipped += 1,
                        }
                    }
                }
            }
            c
        })
        .collect();
    let mut total = Check::new("betweenness equivariance");
    for c in parts {
        total.merge(c);
    }
    total
}
