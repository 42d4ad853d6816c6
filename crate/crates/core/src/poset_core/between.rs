use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::{ExtendedPoset, Relation};
use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// `B_{a,b}` listed in `⪯` order together with its `O`-classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetweenChain {
    pub endpoints: (usize, usize),
    pub members: Vec<usize>,
    /// Consecutive blocks of `members`.
    pub classes: Vec<Vec<usize>>,
}

impl BetweenChain {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn labels(&self, p: &ExtendedPoset) -> Vec<String> {
        self.members.iter().map(|&m| p.label(m).to_string()).collect()
    }
}

/// Raw betweenness on ids; `a > c` is read as `c`..`a`.
pub(crate) fn between_raw(p: &ExtendedPoset, a: usize, b: usize, c: usize) -> bool {
    use Relation::*;
    match p.rel(a, c) {
        Lt => {
            (p.rel(a, b) == Lt && p.rel(b, c) == Lt) || (p.rel(a, b) == SimU && p.rel(b, c) == SimL)
        }
        SimL => (p.rel(a, b) == SimL && p.rel(b, c) == Lt) || (p.rel(c, b) == SimL && p.rel(b, a) == Lt),
        SimU => (p.rel(a, b) == SimU && p.rel(b, c) == Gt) || (p.rel(c, b) == SimU && p.rel(b, a) == Gt),
        Gt => between_raw(p, c, b, a),
        Eq => false,
    }
}

/// Whether `b` is between `a` and `c`.
pub fn is_between(p: &ExtendedPoset, a: usize, b: usize, c: usize) -> Result<bool> {
    for x in [a, b, c] {
        p.classify(x, x)?;
    }
    if a == c {
        return Err(Error::Domain("betweenness needs distinct endpoints".into()));
    }
    Ok(between_raw(p, a, b, c))
}

fn between_bits(p: &ExtendedPoset, a: usize, b: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(p.len());
    s.insert(a);
    s.insert(b);
    if a != b {
        for x in 0..p.len() {
            if between_raw(p, a, x, b) {
                s.insert(x);
            }
        }
    }
    s
}

/// Every `B_{a,b}` as a bit set, with `B_{a,a} = {a}`.
#[derive(Debug, Clone)]
pub struct BetweenTable {
    n: usize,
    sets: Vec<FixedBitSet>,
}

impl BetweenTable {
    pub fn new(p: &ExtendedPoset) -> Self {
        let n = p.len();
        let sets = (0..n * n).into_par_iter().map(|k| between_bits(p, k / n, k % n)).collect();
        BetweenTable { n, sets }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> &FixedBitSet {
        &self.sets[a * self.n + b]
    }

    /// `x ⪯ y` on chains starting at `a`.
    #[inline]
    pub fn preceq(&self, a: usize, x: usize, y: usize) -> bool {
        self.get(a, y).contains(x)
    }
}

fn order_members(
    members: &[usize],
    a: usize,
    in_b: impl Fn(usize, usize) -> bool,
) -> Result<Vec<usize>> {
    // x ⪯ y iff x ∈ B_{a,y}; the rank of y is |{x ∈ members | x ⪯ y}|.
    let mut ranked: Vec<(usize, usize)> =
        members.iter().map(|&y| (members.iter().filter(|&&x| in_b(x, y)).count(), y)).collect();
    ranked.sort();
    for (i, &(r, y)) in ranked.iter().enumerate() {
        if r != i + 1 {
            return Err(Error::Invariant(format!("⪯ is not a total order on B (element #{y}, rank {r})")));
        }
    }
    for &x in members {
        for &y in members {
            if x != y && in_b(x, y) == in_b(y, x) {
                return Err(Error::Invariant(format!("⪯ does not compare #{x} and #{y} exactly once")));
            }
        }
    }
    let _ = a;
    Ok(ranked.into_iter().map(|(_, y)| y).collect())
}

fn split_classes(
    p: &ExtendedPoset,
    ordered: &[usize],
    b_of: impl Fn(usize, usize) -> FixedBitSet,
) -> Result<Vec<Vec<usize>>> {
    let o = |x: usize, y: usize| p.is_chain(b_of(x, y).ones().collect::<Vec<_>>());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in ordered {
        match classes.last_mut() {
            Some(last) if o(last[0], x) => last.push(x),
            _ => classes.push(vec![x]),
        }
    }
    // The block split must agree with the full relation.
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            for &x in ci {
                for &y in cj {
                    if o(x, y) != (i == j) {
                        return Err(Error::Invariant(format!(
                            "O-classes are not ⪯-intervals at ({}, {})",
                            p.label(x),
                            p.label(y)
                        )));
                    }
                }
            }
        }
    }
    Ok(classes)
}

/// `B_{a,b}` in `⪯` order with its `O`-classes.
pub fn between_set(p: &ExtendedPoset, a: usize, b: usize) -> Result<BetweenChain> {
    p.classify(a, b)?;
    if a == b {
        return Err(Error::Domain("B_{a,b} needs a ≠ b".into()));
    }
    let bab = between_bits(p, a, b);
    let members: Vec<usize> = bab.ones().collect();
    let cache: Vec<FixedBitSet> = (0..p.len()).map(|y| between_bits(p, a, y)).collect();
    let ordered = order_members(&members, a, |x, y| cache[y].contains(x))?;
    if ordered.first() != Some(&a) || ordered.last() != Some(&b) {
        return Err(Error::Invariant("B_{a,b} does not run from a to b".into()));
    }
    let classes = split_classes(p, &ordered, |x, y| between_bits(p, x, y))?;
    Ok(BetweenChain { endpoints: (a, b), members: ordered, classes })
}

/// Same as [`between_set`] but reuses a precomputed table.
pub fn between_set_with(p: &ExtendedPoset, t: &BetweenTable, a: usize, b: usize) -> Result<BetweenChain> {
    if a == b {
        return Err(Error::Domain("B_{a,b} needs a ≠ b".into()));
    }
    let members: Vec<usize> = t.get(a, b).ones().collect();
    let ordered = order_members(&members, a, |x, y| t.preceq(a, x, y))?;
    if ordered.first() != Some(&a) || ordered.last() != Some(&b) {
        return Err(Error::Invariant("B_{a,b} does not run from a to b".into()));
    }
    let classes = split_classes(p, &ordered, |x, y| t.get(x, y).clone())?;
    Ok(BetweenChain { endpoints: (a, b), members: ordered, classes })
}

fn union(x: &FixedBitSet, y: &FixedBitSet) -> FixedBitSet {
    let mut u = x.clone();
    u.union_with(y);
    u
}

fn names(p: &ExtendedPoset, ids: &[usize]) -> String {
    ids.iter().map(|&i| p.label(i)).collect::<Vec<_>>().join(", ")
}

/// The four between-set properties, each as its own check:
///
/// 1. `B_{a,b} ⊂ B_{a,c} ∪ B_{c,b}`;
/// 2. `c ∈ B_{a,b} ⟺ B_{a,b} = B_{a,c} ∪ B_{c,b}`;
/// 3. `c ∈ B_{a,b} ⇒ B_{a,c} ∩ B_{c,b} = {c}`;
/// 4. `b ∈ B_{a,c}`, `c ∈ B_{b,d}` ⇒ `b, c ∈ B_{a,d}` (all four distinct
///    where the sets are defined).
pub fn verify_between_theorem(p: &ExtendedPoset) -> Report {
    verify_between_theorem_with(p, &BetweenTable::new(p))
}

pub fn verify_between_theorem_with(p: &ExtendedPoset, t: &BetweenTable) -> Report {
    let n = p.len();
    let per_a = |a: usize| {
        let mut c1 = Check::new("between property (1)");
        let mut c2 = Check::new("between property (2)");
        let mut c3 = Check::new("between property (3)");
        let mut c4 = Check::new("between property (4)");
        for b in 0..n {
            if b == a {
                continue;
            }
            let bab = t.get(a, b);
            for c in 0..n {
                let u = union(t.get(a, c), t.get(c, b));
                c1.expect(bab.is_subset(&u), || format!("(a, b, c) = ({})", names(p, &[a, b, c])));
                if c == a || c == b {
                    continue;
                }
                let inside = bab.contains(c);
                c2.expect(inside == (*bab == u), || {
                    format!("(a, b, c) = ({}): c ∈ B_(a,b) is {inside}", names(p, &[a, b, c]))
                });
                if inside {
                    let meet: Vec<usize> = t.get(a, c).intersection(t.get(c, b)).collect();
                    c3.expect(meet == [c], || {
                        format!("(a, b, c) = ({}): B_(a,c) ∩ B_(c,b) = {{{}}}", names(p, &[a, b, c]), names(p, &meet))
                    });
                }
            }
        }
        for b in 0..n {
            for c in 0..n {
                if b == a || c == a || c == b || !t.get(a, c).contains(b) {
                    continue;
                }
                for d in 0..n {
                    if d == a || d == b || d == c || !t.get(b, d).contains(c) {
                        continue;
                    }
                    let bad = t.get(a, d);
                    c4.expect(bad.contains(b) && bad.contains(c), || {
                        format!("(a, b, c, d) = ({})", names(p, &[a, b, c, d]))
                    });
                }
            }
        }
        [c1, c2, c3, c4]
    };
    let parts: Vec<[Check; 4]> = (0..n).into_par_iter().map(per_a).collect();
    let mut acc = [
        Check::new("between property (1)"),
        Check::new("between property (2)"),
        Check::new("between property (3)"),
        Check::new("between property (4)"),
    ];
    for part in parts {
        for (slot, c) in acc.iter_mut().zip(part) {
            slot.merge(c);
        }
    }
    let mut r = Report::new("between-set theorem");
    for c in acc {
        r.push(c);
    }
    r
}

/// `⪯` is a total order on every `B_{a,b}`: antisymmetric, total and
/// transitive, starting at `a` and ending at `b`.
pub fn verify_total_order(p: &ExtendedPoset, t: &BetweenTable) -> Check {
    let n = p.len();
    let per_a = |a: usize| {
        let mut c = Check::new("⪯ total on B");
        for b in 0..n {
            if a == b {
                continue;
            }
            let m: Vec<usize> = t.get(a, b).ones().collect();
            for &x in &m {
                c.expect(t.preceq(a, a, x) && t.preceq(a, x, b), || {
                    format!("B_({},{}) does not run from a to b at {}", p.label(a), p.label(b), p.label(x))
                });
                for &y in &m {
                    if x == y {
                        continue;
                    }
                    let (xy, yx) = (t.preceq(a, x, y), t.preceq(a, y, x));
                    c.expect(xy != yx, || {
                        format!("B_({},{}): {} and {} compare {}", p.label(a), p.label(b), p.label(x), p.label(y), if xy { "both ways" } else { "neither way" })
                    });
                    if xy {
                        for &z in &m {
                            if z != x && z != y && t.preceq(a, y, z) {
                                c.expect(t.preceq(a, x, z), || {
                                    format!("B_({},{}): ⪯ not transitive on ({})", p.label(a), p.label(b), names(p, &[x, y, z]))
                                });
                            }
                        }
                    }
                }
            }
        }
        c
    };
    let mut total = Check::new("⪯ total on B");
    for c in (0..n).into_par_iter().map(per_a).collect::<Vec<_>>() {
        total.merge(c);
    }
    total
}

/// `O` on each `B_{a,b}` is an equivalence relation whose classes are
/// `⪯`-intervals.
pub fn verify_o_classes(p: &ExtendedPoset, t: &BetweenTable) -> Check {
    let n = p.len();
    let chain: Vec<bool> =
        (0..n * n).into_par_iter().map(|k| p.is_chain(t.get(k / n, k % n).ones().collect::<Vec<_>>())).collect();
    let o = |x: usize, y: usize| chain[x * n + y];
    let per_a = |a: usize| {
        let mut c = Check::new("O-classes");
        for b in 0..n {
            if a == b {
                continue;
            }
            let m: Vec<usize> = t.get(a, b).ones().collect();
            for &x in &m {
                c.expect(o(x, x), || format!("O not reflexive at {}", p.label(x)));
                for &y in &m {
                    c.expect(o(x, y) == o(y, x), || format!("O not symmetric at ({}, {})", p.label(x), p.label(y)));
                    for &z in &m {
                        if o(x, y) && o(y, z) {
                            c.expect(o(x, z), || {
                                format!("B_({},{}): O not transitive on ({})", p.label(a), p.label(b), names(p, &[x, y, z]))
                            });
                        }
                        // Interval: x ⪯ y ⪯ z with x O z forces x O y.
                        if o(x, z) && t.preceq(a, x, y) && t.preceq(a, y, z) {
                            c.expect(o(x, y), || {
                                format!("B_({},{}): class of {} skips {}", p.label(a), p.label(b), p.label(x), p.label(y))
                            });
                        }
                    }
                }
            }
        }
        c
    };
    let mut total = Check::new("O-classes");
    for c in (0..n).into_par_iter().map(per_a).collect::<Vec<_>>() {
        total.merge(c);
    }
    total
}

/// Largest `O`-class count over all `B_{a,b}` (the rectifiability datum of
/// a finite poset).
pub fn max_class_count(p: &ExtendedPoset, t: &BetweenTable) -> Result<usize> {
    let mut best = 0;
    for (a, b) in p.pairs() {
        best = best.max(between_set_with(p, t, a, b)?.class_count());
    }
    Ok(best)
}

/// Structural checks plus every between-set statement, for posets that
/// should be legal simply connected extensions.
pub fn full_suite(p: &ExtendedPoset) -> Report {
    let t = BetweenTable::new(p);
    let mut r = Report::new("extended poset");
    r.push(p.check_extension_consistency());
    r.push(p.check_acyclic());
    r.push(p.check_lemma_propagation());
    r.extend(verify_between_theorem_with(p, &t));
    r.push(verify_total_order(p, &t));
    r.push(verify_o_classes(p, &t));
    r
}
