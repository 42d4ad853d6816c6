use std::fmt;

use serde::{Deserialize, Serialize};

/// The classification of an ordered pair in an extended poset.
///
/// For distinct elements exactly one of `Lt`, `Gt`, `SimU`, `SimL` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    Lt,
    Gt,
    SimU,
    SimL,
    Eq,
}

impl Relation {
    /// The relation seen from the other argument.
    pub fn swap(self) -> Relation {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Gt => Relation::Lt,
            r => r,
        }
    }

    pub fn is_comparable(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt | Relation::Eq)
    }

    pub fn is_incomparable(self) -> bool {
        matches!(self, Relation::SimU | Relation::SimL)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::SimU => "~u",
            Relation::SimL => "~l",
            Relation::Eq => "=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Relation> {
        Some(match s {
            "<" => Relation::Lt,
            ">" => Relation::Gt,
            "~u" => Relation::SimU,
            "~l" => Relation::SimL,
            "=" => Relation::Eq,
            _ => return None,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
