//! Versioned JSON input documents.
//!
//! Every document is an object with a `kind` tag and a `version` string;
//! unknown fields are rejected at every level.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::group_order::{ConeExpr, ConeStructure, GroupModel};
use crate::order_tree::{line_point, Point, TreeGraph};
use crate::orbit_order::{dihedral_example, translation_example, TreeAction};
use crate::poset_core::{ExtendedPoset, PosetBuilder, Relation};

pub const SPEC_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpecDocument {
    GroupOrder(GroupOrderSpec),
    Poset(PosetSpec),
    Tree(TreeSpec),
    Scenario(ScenarioSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupOrderSpec {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupModel,
    pub cones: ConeStructure,
}

/// Strict comparabilities plus tags; `<` is closed transitively and
/// untagged incomparable pairs take the tag of their realized bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub labels: Vec<String>,
    #[serde(default)]
    pub less: Vec<[String; 2]>,
    #[serde(default)]
    pub sim_u: Vec<[String; 2]>,
    #[serde(default)]
    pub sim_l: Vec<[String; 2]>,
    /// Accept tags that contradict realized bounds.
    #[serde(default)]
    pub formal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSpec {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub tree: TreeGraph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionSpec {
    /// `D∞` on the zigzag line `[-w, w]`.
    Dihedral {
        #[serde(default)]
        width: Option<i64>,
    },
    /// A group translating the oriented line through its first coordinate.
    Translation {
        group: GroupModel,
        #[serde(default)]
        width: Option<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub action: ActionSpec,
    /// Coordinate of the base point on the line, e.g. `"1/4"`.
    pub x0: String,
    /// Order on the stabilizer of `x0`, if it is nontrivial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_positive: Option<ConeExpr>,
    /// Cones the orbit order is expected to reproduce.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ConeStructure>,
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<SpecDocument> {
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        let doc: SpecDocument = serde_json::from_value(raw.clone()).map_err(|e| Error::Spec(e.to_string()))?;
        // serde lets extra keys through on unit variants; anything the parsed
        // document does not reproduce was not understood.
        let canon = serde_json::to_value(&doc).expect("spec serializes");
        if let Some(path) = unknown_key(&raw, &canon, String::new()) {
            return Err(Error::Spec(format!("unknown field `{path}`")));
        }
        let v = match &doc {
            SpecDocument::GroupOrder(s) => &s.version,
            SpecDocument::Poset(s) => &s.version,
            SpecDocument::Tree(s) => &s.version,
            SpecDocument::Scenario(s) => &s.version,
        };
        if v != SPEC_VERSION {
            return Err(Error::Spec(format!("unsupported version `{v}` (expected `{SPEC_VERSION}`)")));
        }
        match &doc {
            SpecDocument::GroupOrder(s) => s.group.validate()?,
            SpecDocument::Tree(s) => s.tree.validate().map_err(|e| Error::InvalidTree(e.to_string()))?,
            SpecDocument::Scenario(s) => {
                if let ActionSpec::Translation { group, .. } = &s.action {
                    group.validate()?;
                }
                parse_coordinate(&s.x0)?;
            }
            SpecDocument::Poset(_) => {}
        }
        Ok(doc)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpecDocument::GroupOrder(_) => "group-order",
            SpecDocument::Poset(_) => "poset",
            SpecDocument::Tree(_) => "tree",
            SpecDocument::Scenario(_) => "scenario",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

fn unknown_key(raw: &serde_json::Value, canon: &serde_json::Value, path: String) -> Option<String> {
    use serde_json::Value;
    match (raw, canon) {
        (Value::Object(a), Value::Object(b)) => a.iter().find_map(|(k, v)| {
            let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
            match b.get(k) {
                Some(w) => unknown_key(v, w, p),
                None if v.is_null() => None,
                None => Some(p),
            }
        }),
        (Value::Array(a), Value::Array(b)) => {
            a.iter().zip(b).enumerate().find_map(|(i, (v, w))| unknown_key(v, w, format!("{path}[{i}]")))
        }
        _ => None,
    }
}

fn parse_coordinate(s: &str) -> Result<Dyadic> {
    Dyadic::parse(s).ok_or_else(|| Error::Spec(format!("`{s}` is not a dyadic coordinate")))
}

impl PosetSpec {
    pub fn build(&self) -> Result<ExtendedPoset> {
        let mut b = PosetBuilder::new(self.labels.iter().cloned());
        for [x, y] in &self.less {
            b = b.less(x, y);
        }
        for [x, y] in &self.sim_u {
            b = b.sim_u(x, y);
        }
        for [x, y] in &self.sim_l {
            b = b.sim_l(x, y);
        }
        if self.formal {
            b.build_formal()
        } else {
            b.build()
        }
    }

    /// The document listing every relation of `p` explicitly.
    pub fn from_poset(p: &ExtendedPoset, name: Option<String>) -> PosetSpec {
        let mut s = PosetSpec {
            version: SPEC_VERSION.into(),
            name,
            labels: p.labels().to_vec(),
            less: vec![],
            sim_u: vec![],
            sim_l: vec![],
            formal: false,
        };
        for (a, b) in p.pairs() {
            let pair = |x: usize, y: usize| [p.label(x).to_string(), p.label(y).to_string()];
            match p.rel(a, b) {
                Relation::Lt => s.less.push(pair(a, b)),
                Relation::Gt => s.less.push(pair(b, a)),
                Relation::SimU => s.sim_u.push(pair(a, b)),
                Relation::SimL => s.sim_l.push(pair(a, b)),
                Relation::Eq => {}
            }
        }
        s
    }
}

impl ScenarioSpec {
    pub fn group(&self) -> GroupModel {
        match &self.action {
            ActionSpec::Dihedral { .. } => GroupModel::Dihedral,
            ActionSpec::Translation { group, .. } => group.clone(),
        }
    }

    /// The action, truncated wide enough that `ball(r)` keeps `x0` inside.
    pub fn action(&self, r: usize) -> Result<(TreeAction, Point)> {
        let x = parse_coordinate(&self.x0)?;
        let reach = x.floor().abs() + 2;
        let (a, w) = match &self.action {
            ActionSpec::Dihedral { width } => {
                let w = width.unwrap_or(2 * r as i64 + reach);
                (dihedral_example(w)?, w)
            }
            ActionSpec::Translation { group, width } => {
                let w = width.unwrap_or(r as i64 + reach);
                (translation_example(group.clone(), w)?, w)
            }
        };
        let p = line_point(&a.tree, -w, x)?;
        let q = a.lift_point(p).ok_or_else(|| Error::Domain(format!("{} does not survive the blow-up", self.x0)))?;
        Ok((a, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let ok = r#"{"kind":"group-order","version":"1","group":{"family":"integers"},
            "cones":{"P":{"kind":"cmp","index":0,"op":">","value":0},"U":{"kind":"false"},"L":{"kind":"false"}}}"#;
        assert_eq!(SpecDocument::parse(ok).unwrap().kind(), "group-order");
        let extra = ok.replace("\"version\":\"1\"", "\"version\":\"1\",\"colour\":3");
        assert!(matches!(SpecDocument::parse(&extra), Err(Error::Spec(_))));
        let v2 = ok.replace("\"version\":\"1\"", "\"version\":\"2\"");
        assert!(SpecDocument::parse(&v2).unwrap_err().to_string().contains("version"));
        let nested = ok.replace("\"family\":\"integers\"", "\"family\":\"integers\",\"rank\":1");
        assert!(SpecDocument::parse(&nested).is_err());
    }

    #[test]
    fn poset_documents_roundtrip() {
        let p = PosetBuilder::new(["a", "b", "c", "d", "e"])
            .less("a", "c")
            .less("b", "c")
            .less("d", "a")
            .sim_u("c", "e")
            .sim_u("a", "e")
            .sim_u("b", "e")
            .sim_u("d", "e")
            .build()
            .unwrap();
        let doc = SpecDocument::Poset(PosetSpec::from_poset(&p, None));
        let back = match SpecDocument::parse(&doc.to_json()).unwrap() {
            SpecDocument::Poset(s) => s.build().unwrap(),
            _ => unreachable!(),
        };
        assert_eq!(back, p);
    }
}
