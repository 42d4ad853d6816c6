use serde::Serialize;

use crate::error::Result;
use crate::poset_core::{between_raw, between_set_with, BetweenTable, ExtendedPoset, Relation};
use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    Minus,
    Plain,
    Plus,
}

impl Tag {
    pub const ALL: [Tag; 3] = [Tag::Minus, Tag::Plain, Tag::Plus];

    pub fn suffix(self) -> &'static str {
        match self {
            Tag::Minus => "_-",
            Tag::Plain => "",
            Tag::Plus => "_+",
        }
    }
}

/// An element of `G⁺`: a base element of the ball with a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AugmentedElement {
    pub base: usize,
    pub tag: Tag,
}

/// `G⁺` over a finite base poset. Augmented element `(g, tag)` has id
/// `3g + tag`.
#[derive(Debug, Clone)]
pub struct GPlus {
    pub base: ExtendedPoset,
    pub poset: ExtendedPoset,
}

impl GPlus {
    pub fn id(&self, base: usize, tag: Tag) -> usize {
        3 * base + tag as usize
    }

    pub fn element(&self, id: usize) -> AugmentedElement {
        AugmentedElement { base: id / 3, tag: Tag::ALL[id % 3] }
    }

    pub fn is_tagged(&self, id: usize) -> bool {
        id % 3 != 1
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }
}

/// `x_- < x < x_+`; `x < y ⇒ x_+ < y_-`; tags of incomparable pairs are
/// inherited by all nine tagged combinations.
pub fn blow_up_gplus(p: &ExtendedPoset) -> Result<GPlus> {
    let labels = (0..p.len()).flat_map(|g| Tag::ALL.map(|t| format!("{}{}", p.label(g), t.suffix()))).collect();
    let rel = |x: usize, y: usize| {
        let (a, b) = (x / 3, y / 3);
        if a == b {
            (x % 3).cmp(&(y % 3)).into()
        } else {
            p.rel(a, b)
        }
    };
    let poset = ExtendedPoset::new(labels, rel)?;
    Ok(GPlus { base: p.clone(), poset })
}

impl From<std::cmp::Ordering> for Relation {
    fn from(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => Relation::Lt,
            std::cmp::Ordering::Equal => Relation::Eq,
            std::cmp::Ordering::Greater => Relation::Gt,
        }
    }
}

/// `x R y` iff `x = y`, or both are tagged and nothing lies strictly
/// between them.
pub fn r_equivalent(gp: &GPlus, x: usize, y: usize) -> bool {
    if x == y {
        return true;
    }
    if !gp.is_tagged(x) || !gp.is_tagged(y) {
        return false;
    }
    (0..gp.len()).all(|z| z == x || z == y || !between_raw(&gp.poset, x, z, y))
}

/// `R` is an equivalence relation.
pub fn check_r_equivalence(gp: &GPlus) -> Check {
    let n = gp.len();
    let mut c = Check::new("R is an equivalence");
    let r: Vec<bool> = (0..n * n).map(|k| r_equivalent(gp, k / n, k % n)).collect();
    for x in 0..n {
        c.expect(r[x * n + x], || format!("R not reflexive at {}", gp.poset.label(x)));
        for y in 0..n {
            if !r[x * n + y] {
                continue;
            }
            c.expect(r[y * n + x], || format!("R not symmetric at ({}, {})", gp.poset.label(x), gp.poset.label(y)));
            for z in 0..n {
                if r[y * n + z] {
                    c.expect(r[x * n + z], || {
                        format!(
                            "R not transitive on ({}, {}, {})",
                            gp.poset.label(x),
                            gp.poset.label(y),
                            gp.poset.label(z)
                        )
                    });
                }
            }
        }
    }
    c
}

/// For distinct `x, y ∈ G` no `O`-class of `B_{x,y}` in `G⁺` is a single
/// point.
pub fn check_no_singleton_classes(gp: &GPlus, table: &BetweenTable) -> Check {
    let mut c = Check::new("no singleton O-class in G⁺");
    for (a, b) in gp.base.pairs() {
        let (x, y) = (gp.id(a, Tag::Plain), gp.id(b, Tag::Plain));
        match between_set_with(&gp.poset, table, x, y) {
            Ok(chain) => {
                for class in &chain.classes {
                    c.expect(class.len() >= 2, || {
                        format!("B_({},{}) has singleton class {{{}}}", gp.base.label(a), gp.base.label(b), gp.poset.label(class[0]))
                    });
                }
            }
            Err(e) => c.fail(|| e.to_string()),
        }
    }
    c
}

/// Exactly the equivalence matching `rel(a, b)` holds:
/// `a < b ⟺ {a_+, b_-} ⊂ B_{a_-,b_+}`,
/// `a ~u b ⟺ {a_+, b_+} ⊂ B_{a_-,b_-}`,
/// `a ~l b ⟺ {a_-, b_-} ⊂ B_{a_+,b_+}`.
pub fn check_augmented_between(gp: &GPlus, a: usize, b: usize) -> Check {
    use Tag::*;
    let mut c = Check::new("augmented betweenness");
    let in_b = |x: (usize, Tag), y: (usize, Tag), m: (usize, Tag)| {
        let (x, y, m) = (gp.id(x.0, x.1), gp.id(y.0, y.1), gp.id(m.0, m.1));
        m == x || m == y || between_raw(&gp.poset, x, m, y)
    };
    let lt = in_b((a, Minus), (b, Plus), (a, Plus)) && in_b((a, Minus), (b, Plus), (b, Minus));
    let su = in_b((a, Minus), (b, Minus), (a, Plus)) && in_b((a, Minus), (b, Minus), (b, Plus));
    let sl = in_b((a, Plus), (b, Plus), (a, Minus)) && in_b((a, Plus), (b, Plus), (b, Minus));
    let r = gp.base.rel(a, b);
    let want = [r == Relation::Lt, r == Relation::SimU, r == Relation::SimL];
    c.expect([lt, su, sl] == want, || {
        format!(
            "{} {} {}: (<, ~u, ~l) memberships are ({lt}, {su}, {sl})",
            gp.base.label(a),
            r,
            gp.base.label(b)
        )
    });
    c
}
