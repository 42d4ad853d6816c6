use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::group_order::{blow_up_gplus, r_equivalent, GPlus, Tag};
use crate::poset_core::{between_set_with, BetweenChain, BetweenTable, ExtendedPoset};

/// A ball poset with its `G⁺` blow-up and between tables for both.
#[derive(Debug, Clone)]
pub struct BuildContext {
    pub gp: GPlus,
    pub base_table: BetweenTable,
    pub plus_table: BetweenTable,
    r_classes: Vec<usize>,
}

impl BuildContext {
    pub fn new(p: &ExtendedPoset) -> Result<Self> {
        let gp = blow_up_gplus(p)?;
        let base_table = BetweenTable::new(p);
        let plus_table = BetweenTable::new(&gp.poset);
        // R is an equivalence relation (checked elsewhere); keep class minima.
        let r_classes = (0..gp.len()).map(|x| (0..=x).find(|&y| r_equivalent(&gp, x, y)).unwrap_or(x)).collect();
        Ok(Self { gp, base_table, plus_table, r_classes })
    }

    pub fn base(&self) -> &ExtendedPoset {
        &self.gp.base
    }

    pub fn len(&self) -> usize {
        self.gp.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn aug(&self, g: usize, tag: Tag) -> usize {
        self.gp.id(g, tag)
    }

    pub fn plus_label(&self, a: usize) -> &str {
        self.gp.poset.label(a)
    }

    pub fn between(&self, x: usize, y: usize) -> Result<BetweenChain> {
        between_set_with(self.base(), &self.base_table, x, y)
    }

    pub fn between_bits(&self, x: usize, y: usize) -> &FixedBitSet {
        self.base_table.get(x, y)
    }

    /// `B_{a,b}` in `G⁺` (augmented ids).
    pub fn plus_between(&self, a: usize, b: usize) -> &FixedBitSet {
        self.plus_table.get(a, b)
    }

    pub fn r_equiv(&self, a: usize, b: usize) -> bool {
        self.r_classes[a] == self.r_classes[b]
    }

    /// The tag of `g` lying in `B_{g,y}` of `G⁺`: the side `g` is left by
    /// towards `y`.
    pub fn leaving_tag(&self, g: usize, y: usize) -> Option<Tag> {
        let b = self.plus_between(self.aug(g, Tag::Plain), self.aug(y, Tag::Plain));
        let minus = b.contains(self.aug(g, Tag::Minus));
        let plus = b.contains(self.aug(g, Tag::Plus));
        match (minus, plus) {
            (true, false) => Some(Tag::Minus),
            (false, true) => Some(Tag::Plus),
            _ => None,
        }
    }
}
