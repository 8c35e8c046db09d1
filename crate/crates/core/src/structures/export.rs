use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{all_canonical_structures, compare, HypStructure, PosetOrdering};
use crate::arith::KFactorization;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetFormat {
    Dot,
    Json,
}

impl FromStr for PosetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(PosetFormat::Dot),
            "json" => Ok(PosetFormat::Json),
            _ => Err(Error::Unknown {
                kind: "format",
                name: s.to_string(),
            }),
        }
    }
}

const SCHEMATIC: &str = "lineal:*";

fn label(s: &HypStructure) -> String {
    match s {
        HypStructure::Elliptic => "elliptic".into(),
        HypStructure::Lineal(c) => c.label(),
        HypStructure::QuasiParabolic { model, .. } => model.to_string(),
    }
}

/// Hasse diagram edges `(lo, hi)` between canonical structures, plus the
/// edge from elliptic to the schematic lineal layer.
fn edges(all: &[HypStructure]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for lo in all {
        for hi in all {
            if compare(lo, hi) != PosetOrdering::Less {
                continue;
            }
            let covered = all.iter().any(|m| {
                compare(lo, m) == PosetOrdering::Less && compare(m, hi) == PosetOrdering::Less
            });
            if !covered {
                out.push((lo.id(), hi.id()));
            }
        }
    }
    out.push(("elliptic".into(), SCHEMATIC.into()));
    out
}

/// The poset as a DOT digraph or JSON document. Output is deterministic.
pub fn export_poset(fact: &KFactorization, format: PosetFormat) -> String {
    let all = all_canonical_structures(fact);
    let edges = edges(&all);
    match format {
        PosetFormat::Dot => {
            let mut s = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
            for st in &all {
                let _ = writeln!(s, "  \"{}\" [label=\"{}\"];", st.id(), label(st));
            }
            let _ = writeln!(
                s,
                "  \"{SCHEMATIC}\" [label=\"other lineal classes\", style=dashed];"
            );
            for (lo, hi) in &edges {
                let _ = writeln!(s, "  \"{lo}\" -> \"{hi}\";");
            }
            s.push_str("}\n");
            s
        }
        PosetFormat::Json => {
            let mut nodes: Vec<Value> = all
                .iter()
                .map(|st| {
                    let mut v = st.to_json();
                    v["id"] = json!(st.id());
                    v["schematic"] = json!(false);
                    v
                })
                .collect();
            nodes.push(json!({"id": SCHEMATIC, "kind": "lineal", "schematic": true}));
            let edges: Vec<Value> = edges
                .iter()
                .map(|(lo, hi)| json!({"lo": lo, "hi": hi}))
                .collect();
            let doc = json!({"k": fact.k(), "n": fact.n(), "nodes": nodes, "edges": edges});
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    }
}
