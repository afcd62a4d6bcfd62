//! Input documents.
//!
//! Law file: `{"q": 2, "k": 2, "z": [1.0, 0.25]}` (`q` optional; `z` is
//! rescaled so that `z_0 = 1`).
//!
//! Tree file: `{"k": 2, "root": 0, "edges": [[0, 1], [1, 2]]}`, or
//! `{"k": 2, "single_bond": true}` for the single-bond volume.
//!
//! Configuration file: `{"zeta": [1, 0, -2]}`, one increment per bond in the
//! order listed by `marginal`.

use std::path::Path;

use serde::Deserialize;

use crate::error::Error;
use crate::model::PeriodicBoundaryLaw;
use crate::tree::{FiniteSubtree, GradientConfig, VertexId};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LawDoc {
    q: Option<usize>,
    k: usize,
    z: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    k: usize,
    #[serde(default)]
    root: Option<VertexId>,
    #[serde(default)]
    edges: Vec<(VertexId, VertexId)>,
    #[serde(default)]
    single_bond: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    zeta: Vec<i64>,
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn describe(path: &Path, e: Error) -> String {
    format!("{}: {e}", path.display())
}

pub fn parse_law(text: &str) -> Result<PeriodicBoundaryLaw, String> {
    let doc: LawDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if let Some(q) = doc.q {
        if q != doc.z.len() {
            return Err(format!("q = {q} but z has {} entries", doc.z.len()));
        }
    }
    PeriodicBoundaryLaw::normalized(doc.k, doc.z).map_err(|e| e.to_string())
}

pub fn read_law(path: &Path) -> Result<PeriodicBoundaryLaw, String> {
    parse_law(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn read_tree(path: &Path) -> Result<FiniteSubtree, String> {
    let doc: TreeDoc = parse(path)?;
    if doc.single_bond {
        if !doc.edges.is_empty() {
            return Err(format!("{}: single_bond takes no edges", path.display()));
        }
        return FiniteSubtree::single_bond(doc.k).map_err(|e| describe(path, e));
    }
    let root = match (doc.root, doc.edges.first()) {
        (Some(r), _) => r,
        (None, Some(&(a, _))) => a,
        (None, None) => 0,
    };
    FiniteSubtree::build(doc.k, &doc.edges, root).map_err(|e| describe(path, e))
}

pub fn read_config(path: &Path, tree: &FiniteSubtree) -> Result<GradientConfig, String> {
    let doc: ConfigDoc = parse(path)?;
    GradientConfig::from_values(tree, doc.zeta).map_err(|e| describe(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_documents() {
        let law = parse_law(r#"{"q": 2, "k": 2, "z": [2.0, 0.5]}"#).unwrap();
        assert_eq!(law.z(), &[1.0, 0.25]);
        assert!(parse_law(r#"{"q": 3, "k": 2, "z": [1.0, 0.5]}"#).is_err());
        assert!(parse_law(r#"{"k": 2, "z": [1.0, -0.5]}"#).is_err());
        assert!(parse_law(r#"{"k": 1, "z": [1.0]}"#).is_err());
        assert!(parse_law(r#"{"k": 2, "z": [1.0], "extra": 1}"#).is_err());
    }
}
