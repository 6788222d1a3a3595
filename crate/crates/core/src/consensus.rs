//! Strict, majority-rule and threshold consensus trees read off a TAG.
//!
//! All three share one propagation pass. Nodes are visited in topological
//! order; each node hands its successors the smallest selected ancestor it
//! knows of (itself, if selected), and a successor keeps the smallest
//! cardinality offered. Selected nodes then hang under their recorded
//! ancestor. Only the membership predicate differs between the variants.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{PhyloTree, VertexId};
use crate::tag::{tag_root, NodeId, Tag, TagError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsensusError {
    #[error(transparent)]
    Tag(#[from] TagError),
    #[error("tree count must be at least 1")]
    NoTrees,
    #[error("threshold {threshold} must exceed half of the {trees} trees")]
    ThresholdTooLow { threshold: usize, trees: usize },
    #[error("threshold {threshold} exceeds the tree count {trees}")]
    ThresholdTooHigh { threshold: usize, trees: usize },
}

/// Which TAG nodes become consensus clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// `count > k / 2`
    Majority,
    /// `count == k`
    Strict,
    /// `count >= t`, valid for `k / 2 < t <= k`
    AtLeast(usize),
}

impl Selection {
    fn min_count(self, k: usize) -> usize {
        match self {
            Selection::Majority => k / 2 + 1,
            Selection::Strict => k,
            Selection::AtLeast(t) => t,
        }
    }
}

/// Result of the propagation pass: the selected nodes and each one's
/// computed parent.
#[derive(Debug, Clone)]
pub struct ConsensusParents {
    root: NodeId,
    selected: Vec<bool>,
    parent: Vec<NodeId>,
    ancestor_size: Vec<usize>,
    visits: usize,
}

impl ConsensusParents {
    /// The TAG node of the full leaf set.
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_selected(&self, u: NodeId) -> bool {
        self.selected[u.0]
    }

    pub fn selected(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.selected.len())
            .filter(|&u| self.selected[u])
            .map(NodeId)
    }

    /// Smallest selected ancestor found for `u`; `None` for the root.
    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        (u != self.root).then(|| self.parent[u.0])
    }

    /// Cardinality of [`parent`](Self::parent).
    pub fn ancestor_cardinality(&self, u: NodeId) -> Option<usize> {
        (u != self.root).then(|| self.ancestor_size[u.0])
    }

    /// Nodes plus edges touched by the main loop.
    pub fn visits(&self) -> usize {
        self.visits
    }
}

/// Runs the propagation pass for `k` trees under `selection`.
pub fn consensus_parents(
    tag: &Tag,
    k: usize,
    selection: Selection,
) -> Result<ConsensusParents, ConsensusError> {
    if k == 0 {
        return Err(ConsensusError::NoTrees);
    }
    if let Selection::AtLeast(t) = selection {
        if 2 * t <= k {
            return Err(ConsensusError::ThresholdTooLow {
                threshold: t,
                trees: k,
            });
        }
        if t > k {
            return Err(ConsensusError::ThresholdTooHigh {
                threshold: t,
                trees: k,
            });
        }
    }
    let root = tag_root(tag)?;
    let min_count = selection.min_count(k);
    let n = tag.taxon_count();
    let view = tag.simple_view();

    let selected: Vec<bool> = tag
        .nodes()
        .iter()
        .map(|node| node.count >= min_count)
        .collect();
    let mut ancestor_size = vec![n; tag.node_count()];
    let mut parent = vec![root; tag.node_count()];

    // The root is the only source, so dropping it first from the order
    // leaves a topological order of the rest.
    let order = view.topological_order().expect("a TAG is acyclic");
    debug_assert_eq!(order.first(), Some(&root));

    let mut visits = 0;
    for &u in order.iter().filter(|&&u| u != root) {
        visits += 1;
        let (size, best) = if selected[u.0] {
            (tag.cardinality(u), u)
        } else {
            (ancestor_size[u.0], parent[u.0])
        };
        for &v in view.successors(u) {
            visits += 1;
            if ancestor_size[v.0] > size {
                ancestor_size[v.0] = size;
                parent[v.0] = best;
            }
        }
    }

    Ok(ConsensusParents {
        root,
        selected,
        parent,
        ancestor_size,
        visits,
    })
}

/// A consensus tree together with the TAG node behind each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusTree {
    pub tree: PhyloTree,
    /// Indexed by vertex.
    pub nodes: Vec<NodeId>,
}

impl ConsensusTree {
    fn assemble(tag: &Tag, parents: &ConsensusParents) -> Self {
        let members: Vec<NodeId> = parents.selected().collect();
        let mut vertex_of = vec![usize::MAX; tag.node_count()];
        for (v, &u) in members.iter().enumerate() {
            vertex_of[u.0] = v;
        }
        let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); members.len()];
        for (v, &u) in members.iter().enumerate() {
            if let Some(p) = parents.parent(u) {
                children[vertex_of[p.0]].push(v);
            }
        }
        let labels = members
            .iter()
            .map(|&u| tag.leaf_name(u).map(Into::into))
            .collect();
        let tree = PhyloTree::from_parts(vertex_of[parents.root().0], children, labels)
            .expect("selected clusters form a hierarchy containing every singleton");
        ConsensusTree {
            tree,
            nodes: members,
        }
    }
}

/// Majority-rule consensus: clusters found in more than half of `k` trees.
pub fn majority_rule_tree(tag: &Tag, k: usize) -> Result<ConsensusTree, ConsensusError> {
    let parents = consensus_parents(tag, k, Selection::Majority)?;
    Ok(ConsensusTree::assemble(tag, &parents))
}

/// Strict consensus: clusters found in all `k` trees.
pub fn strict_consensus_tree(tag: &Tag, k: usize) -> Result<ConsensusTree, ConsensusError> {
    let parents = consensus_parents(tag, k, Selection::Strict)?;
    Ok(ConsensusTree::assemble(tag, &parents))
}

/// Clusters found in at least `threshold` of `k` trees, for
/// `k / 2 < threshold <= k`. Lower thresholds could select conflicting
/// clusters and are rejected.
pub fn threshold_consensus(
    tag: &Tag,
    k: usize,
    threshold: usize,
) -> Result<ConsensusTree, ConsensusError> {
    let parents = consensus_parents(tag, k, Selection::AtLeast(threshold))?;
    Ok(ConsensusTree::assemble(tag, &parents))
}
