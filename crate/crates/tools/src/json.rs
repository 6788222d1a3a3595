//! JSON forms of a TAG and of the order-dependence report.

use phylotag::{BitString, Tag};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagDump {
    /// Number of taxa, the bit-string width.
    pub taxa: usize,
    /// Taxon names, index `i` is bit `i`.
    pub labels: Vec<String>,
    pub trees: usize,
    pub nodes: Vec<NodeDump>,
    pub edges: Vec<EdgeDump>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDump {
    pub id: usize,
    /// Hex digits, first digit covers taxa 0..4.
    pub bits: String,
    pub cardinality: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeDump {
    pub source: usize,
    pub target: usize,
    pub tree: usize,
    pub parent_vertex: usize,
    pub child_vertex: usize,
}

impl TagDump {
    pub fn of(tag: &Tag) -> Self {
        let nodes = tag
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| NodeDump {
                id,
                bits: n.bits.to_hex(),
                cardinality: n.cardinality,
                count: n.count,
            })
            .collect();
        let mut edges: Vec<EdgeDump> = tag
            .edges()
            .iter()
            .map(|e| EdgeDump {
                source: e.source.0,
                target: e.target.0,
                tree: e.tree.0,
                parent_vertex: e.parent_vertex,
                child_vertex: e.child_vertex,
            })
            .collect();
        edges.sort();
        TagDump {
            taxa: tag.taxon_count(),
            labels: tag.space().names().to_vec(),
            trees: tag.tree_count(),
            nodes,
            edges,
        }
    }

    /// Node bit-strings decoded back from hex.
    pub fn node_bits(&self) -> Option<Vec<BitString>> {
        self.nodes
            .iter()
            .map(|n| BitString::from_hex(self.taxa, &n.bits))
            .collect()
    }
}

/// Canonical pretty-printed dump; equal TAGs give equal bytes.
pub fn tag_to_json(tag: &Tag) -> String {
    let mut s = serde_json::to_string_pretty(&TagDump::of(tag)).expect("plain data serializes");
    s.push('\n');
    s
}
