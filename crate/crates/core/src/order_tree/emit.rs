use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::blowup::{ArcOrigin, OneManifold};
use super::graph::{NodeKind, TreeGraph};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: edges point in the positive direction, open ends
/// are small dots and limit links are dashed.
pub fn to_dot(t: &TreeGraph, name: &str) -> String {
    dot_with(t, name, |_| None)
}

/// As [`to_dot`], with stubs and linear arcs of the blow-up styled apart.
pub fn manifold_to_dot(m: &OneManifold, name: &str) -> String {
    dot_with(&m.graph, name, |a| match m.arc_origin[a] {
        ArcOrigin::Original(_) => None,
        ArcOrigin::Linear(_) => Some("color=blue"),
        ArcOrigin::Stub(_) => Some("color=gray"),
    })
}

fn dot_with(t: &TreeGraph, name: &str, style: impl Fn(usize) -> Option<&'static str>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(name));
    let _ = writeln!(s, "  rankdir=LR;");
    for (i, n) in t.nodes.iter().enumerate() {
        match n.kind {
            NodeKind::Real => {
                let _ = writeln!(s, "  n{i} [label={}];", quote(&n.label));
            }
            NodeKind::OpenEnd => {
                let _ = writeln!(s, "  n{i} [shape=point, xlabel={}];", quote(&n.label));
            }
        }
    }
    for (i, a) in t.arcs.iter().enumerate() {
        let (tail, head) = if a.forward { (a.from, a.to) } else { (a.to, a.from) };
        let label = if a.label.is_empty() { format!("[{}, {}]", a.lo, a.hi) } else { a.label.clone() };
        let extra = style(i).map(|x| format!(", {x}")).unwrap_or_default();
        let _ = writeln!(s, "  n{tail} -> n{head} [label={}{extra}];", quote(&label));
    }
    for l in &t.limits {
        let _ = writeln!(s, "  n{} -> n{} [style=dashed, arrowhead=none];", l.open_end, l.node);
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDocument {
    version: u32,
    tree: TreeGraph,
}

pub fn to_json(t: &TreeGraph) -> String {
    serde_json::to_string_pretty(&TreeDocument { version: FORMAT_VERSION, tree: t.clone() }).expect("serializable")
}

/// Parses and validates a document written by [`to_json`].
pub fn from_json(s: &str) -> Result<TreeGraph> {
    let doc: TreeDocument = serde_json::from_str(s).map_err(|e| Error::Spec(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Spec(format!("unsupported tree format version {}", doc.version)));
    }
    doc.tree.validate()?;
    Ok(doc.tree)
}
