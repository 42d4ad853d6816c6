use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::Relation;
use crate::error::{Error, Result};
use crate::report::Check;

/// A finite set with every ordered pair classified as `<`, `>`, `~u`, `~l`
/// or `=`.
///
/// Elements are addressed by their position in the construction order; that
/// order is used for deterministic iteration and reporting only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedPoset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    rel: Vec<Relation>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl ExtendedPoset {
    /// Builds and validates a poset, including extension consistency: an
    /// incomparable pair with a common upper (lower) bound must be tagged
    /// `~u` (`~l`).
    pub fn new(labels: Vec<String>, rel: impl Fn(usize, usize) -> Relation) -> Result<Self> {
        let p = Self::new_formal(labels, rel)?;
        let check = p.check_extension_consistency();
        if !check.passed() {
            return Err(Error::InvalidPoset(format!(
                "extension consistency: {}",
                check.witnesses.first().cloned().unwrap_or_default()
            )));
        }
        Ok(p)
    }

    /// Like [`ExtendedPoset::new`] but only validates totality, swap
    /// consistency and transitivity. Tags on incomparable pairs are taken as
    /// given even when they disagree with realized bounds.
    pub fn new_formal(labels: Vec<String>, rel: impl Fn(usize, usize) -> Relation) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element `{l}`")));
            }
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(rel(a, b));
            }
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                let r = table[a * n + b];
                if (a == b) != (r == Relation::Eq) {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` {} `{}`: Eq must hold exactly on identical elements",
                        labels[a], r, labels[b]
                    )));
                }
                if table[b * n + a] != r.swap() {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` {} `{}` but `{}` {} `{}`",
                        labels[a],
                        r,
                        labels[b],
                        labels[b],
                        table[b * n + a],
                        labels[a]
                    )));
                }
                if r == Relation::Lt {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        for a in 0..n {
            for b in up[a].ones() {
                if !up[b].is_subset(&up[a]) {
                    let c = up[b].difference(&up[a]).next().unwrap();
                    return Err(Error::InvalidPoset(format!(
                        "< is not transitive: `{}` < `{}` < `{}`",
                        labels[a], labels[b], labels[c]
                    )));
                }
            }
        }
        Ok(ExtendedPoset { labels, index, rel: table, up, down })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn id(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    /// Unchecked lookup for hot loops; ids must be in range.
    #[inline]
    pub fn rel(&self, a: usize, b: usize) -> Relation {
        self.rel[a * self.labels.len() + b]
    }

    pub fn classify(&self, a: usize, b: usize) -> Result<Relation> {
        let n = self.len();
        if a >= n {
            return Err(Error::UnknownElement(format!("#{a}")));
        }
        if b >= n {
            return Err(Error::UnknownElement(format!("#{b}")));
        }
        Ok(self.rel(a, b))
    }

    pub fn classify_labels(&self, a: &str, b: &str) -> Result<Relation> {
        Ok(self.rel(self.id(a)?, self.id(b)?))
    }

    /// Strict upper set `{b | a < b}`.
    pub fn upper(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// Strict lower set `{b | b < a}`.
    pub fn lower(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    pub fn has_common_upper(&self, a: usize, b: usize) -> bool {
        self.up[a].intersection(&self.up[b]).next().is_some()
    }

    pub fn has_common_lower(&self, a: usize, b: usize) -> bool {
        self.down[a].intersection(&self.down[b]).next().is_some()
    }

    /// Unordered pairs `a < b` of distinct elements.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
    }

    /// The sub-poset on `ids`, in the given order.
    pub fn restrict(&self, ids: &[usize]) -> Result<ExtendedPoset> {
        let labels = ids.iter().map(|&i| self.labels[i].clone()).collect();
        ExtendedPoset::new_formal(labels, |a, b| self.rel(ids[a], ids[b]))
    }

    /// Realized bounds agree with the `~u` / `~l` tags.
    pub fn check_extension_consistency(&self) -> Check {
        let mut check = Check::new("extension consistency");
        for (a, b) in self.pairs() {
            let r = self.rel(a, b);
            if !r.is_incomparable() {
                continue;
            }
            let u = self.has_common_upper(a, b);
            let l = self.has_common_lower(a, b);
            check.expect(!(u && l), || {
                format!("`{}`, `{}` have both common upper and lower bounds", self.labels[a], self.labels[b])
            });
            if u {
                check.expect(r == Relation::SimU, || {
                    format!("`{}` {} `{}` but they share an upper bound", self.labels[a], r, self.labels[b])
                });
            }
            if l {
                check.expect(r == Relation::SimL, || {
                    format!("`{}` {} `{}` but they share a lower bound", self.labels[a], r, self.labels[b])
                });
            }
        }
        check
    }

    /// Every `~u` pair has a realized common upper bound and every `~l`
    /// pair a realized common lower bound. Witnesses are the purely formal
    /// relations.
    pub fn check_strongly_connected(&self) -> Check {
        let mut check = Check::new("strongly connected");
        for (a, b) in self.pairs() {
            match self.rel(a, b) {
                Relation::SimU => check.expect(self.has_common_upper(a, b), || {
                    format!("({}, {}) tagged ~u without a common upper bound", self.labels[a], self.labels[b])
                }),
                Relation::SimL => check.expect(self.has_common_lower(a, b), || {
                    format!("({}, {}) tagged ~l without a common lower bound", self.labels[a], self.labels[b])
                }),
                _ => {}
            }
        }
        check
    }

    /// `x ~u y` and `x ~l z` force `z > y`.
    pub fn check_acyclic(&self) -> Check {
        let mut check = Check::new("acyclic");
        let n = self.len();
        for x in 0..n {
            let us: Vec<usize> = (0..n).filter(|&y| self.rel(x, y) == Relation::SimU).collect();
            if us.is_empty() {
                continue;
            }
            let ls: Vec<usize> = (0..n).filter(|&z| self.rel(x, z) == Relation::SimL).collect();
            for &y in &us {
                for &z in &ls {
                    check.expect(self.rel(z, y) == Relation::Gt, || {
                        format!(
                            "({}, {}, {}): {} ~u {}, {} ~l {} but {} {} {}",
                            self.labels[x],
                            self.labels[y],
                            self.labels[z],
                            self.labels[x],
                            self.labels[y],
                            self.labels[x],
                            self.labels[z],
                            self.labels[z],
                            self.rel(z, y),
                            self.labels[y]
                        )
                    });
                }
            }
        }
        check
    }

    /// Both propagation rules: `x ~l y, y < z ⇒ x ~l z` and
    /// `x ~u y, y > z ⇒ x ~u z`.
    pub fn check_lemma_propagation(&self) -> Check {
        let mut check = Check::new("~l/~u propagation");
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                let r = self.rel(x, y);
                let (targets, want) = match r {
                    Relation::SimL => (&self.up[y], Relation::SimL),
                    Relation::SimU => (&self.down[y], Relation::SimU),
                    _ => continue,
                };
                for z in targets.ones() {
                    check.expect(self.rel(x, z) == want, || {
                        format!(
                            "{} {} {}, {} {} {} but {} {} {}",
                            self.labels[x],
                            r,
                            self.labels[y],
                            self.labels[y],
                            self.rel(y, z),
                            self.labels[z],
                            self.labels[x],
                            self.rel(x, z),
                            self.labels[z]
                        )
                    });
                }
            }
        }
        check
    }

    /// At least one incomparable pair exists and all carry the same tag.
    pub fn is_trivial_extension(&self) -> bool {
        let mut seen: Option<Relation> = None;
        for (a, b) in self.pairs() {
            let r = self.rel(a, b);
            if r.is_incomparable() {
                match seen {
                    None => seen = Some(r),
                    Some(s) if s != r => return false,
                    _ => {}
                }
            }
        }
        seen.is_some()
    }

    /// Whether every pair of `ids` is comparable.
    pub fn is_chain(&self, ids: impl IntoIterator<Item = usize> + Clone) -> bool {
        for a in ids.clone() {
            for b in ids.clone() {
                if !self.rel(a, b).is_comparable() {
                    return false;
                }
            }
        }
        true
    }

    /// `(tag counts)`: number of unordered pairs per relation.
    pub fn relation_counts(&self) -> [(Relation, usize); 4] {
        let mut c = [0usize; 4];
        for (a, b) in self.pairs() {
            match self.rel(a, b) {
                Relation::Lt => c[0] += 1,
                Relation::Gt => c[1] += 1,
                Relation::SimU => c[2] += 1,
                Relation::SimL => c[3] += 1,
                Relation::Eq => {}
            }
        }
        [(Relation::Lt, c[0]), (Relation::Gt, c[1]), (Relation::SimU, c[2]), (Relation::SimL, c[3])]
    }
}

/// Assembles a poset from strict comparabilities and explicit tags.
///
/// `<` is closed transitively. Incomparable pairs without an explicit tag
/// take the tag forced by a realized common bound; a pair with neither a tag
/// nor a bound is an error.
#[derive(Debug, Clone, Default)]
pub struct PosetBuilder {
    labels: Vec<String>,
    less: Vec<(String, String)>,
    tags: Vec<(String, String, Relation)>,
}

impl PosetBuilder {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        PosetBuilder { labels: labels.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn less(mut self, a: &str, b: &str) -> Self {
        self.less.push((a.into(), b.into()));
        self
    }

    pub fn sim_u(mut self, a: &str, b: &str) -> Self {
        self.tags.push((a.into(), b.into(), Relation::SimU));
        self
    }

    pub fn sim_l(mut self, a: &str, b: &str) -> Self {
        self.tags.push((a.into(), b.into(), Relation::SimL));
        self
    }

    pub fn tag(mut self, a: &str, b: &str, r: Relation) -> Self {
        self.tags.push((a.into(), b.into(), r));
        self
    }

    fn table(&self) -> Result<Vec<Relation>> {
        let n = self.labels.len();
        let idx: HashMap<&str, usize> = self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let get = |s: &str| idx.get(s).copied().ok_or_else(|| Error::UnknownElement(s.to_string()));
        let mut lt = vec![false; n * n];
        for (a, b) in &self.less {
            let (a, b) = (get(a)?, get(b)?);
            if a == b {
                return Err(Error::InvalidPoset(format!("`{}` < itself", self.labels[a])));
            }
            lt[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if lt[i * n + k] {
                    for j in 0..n {
                        if lt[k * n + j] {
                            lt[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let mut table = vec![Relation::Eq; n * n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                table[a * n + b] = match (lt[a * n + b], lt[b * n + a]) {
                    (true, true) => {
                        return Err(Error::InvalidPoset(format!(
                            "cycle through `{}` and `{}`",
                            self.labels[a], self.labels[b]
                        )))
                    }
                    (true, false) => Relation::Lt,
                    (false, true) => Relation::Gt,
                    (false, false) => {
                        let cu = (0..n).any(|c| lt[a * n + c] && lt[b * n + c]);
                        let cl = (0..n).any(|c| lt[c * n + a] && lt[c * n + b]);
                        match (cu, cl) {
                            (true, false) => Relation::SimU,
                            (false, true) => Relation::SimL,
                            // Decided by explicit tags below (or rejected).
                            _ => Relation::Eq,
                        }
                    }
                };
            }
        }
        for (a, b, r) in &self.tags {
            let (a, b) = (get(a)?, get(b)?);
            if a == b || !r.is_incomparable() {
                return Err(Error::InvalidPoset(format!("bad tag {r} on `{}`, `{}`", self.labels[a], self.labels[b])));
            }
            if table[a * n + b].is_comparable() && table[a * n + b] != Relation::Eq {
                return Err(Error::InvalidPoset(format!(
                    "tag {r} on comparable pair `{}`, `{}`",
                    self.labels[a], self.labels[b]
                )));
            }
            table[a * n + b] = *r;
            table[b * n + a] = *r;
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && table[a * n + b] == Relation::Eq {
                    return Err(Error::InvalidPoset(format!(
                        "pair `{}`, `{}` is incomparable with no tag and no unique bound type",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn build(self) -> Result<ExtendedPoset> {
        let table = self.table()?;
        let n = self.labels.len();
        ExtendedPoset::new(self.labels, |a, b| table[a * n + b])
    }

    /// Skips extension consistency (explicit tags win over bounds).
    pub fn build_formal(self) -> Result<ExtendedPoset> {
        let table = self.table()?;
        let n = self.labels.len();
        ExtendedPoset::new_formal(self.labels, |a, b| table[a * n + b])
    }
}

/// A chain `0 < 1 < ... < n-1` labelled by the integers.
pub fn chain(n: usize) -> ExtendedPoset {
    ExtendedPoset::new((0..n).map(|i| i.to_string()).collect(), |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Less => Relation::Lt,
        std::cmp::Ordering::Greater => Relation::Gt,
        std::cmp::Ordering::Equal => Relation::Eq,
    })
    .expect("a chain is a valid poset")
}
