//! The procedural, order-dependent TAG construction, kept for comparison.
//!
//! Trees are processed one at a time. Each internal vertex is mapped onto
//! every existing node whose cluster contains the vertex's cluster and no
//! other taxon of that tree; a new node is created only when nothing
//! qualifies. Which nodes exist therefore depends on which trees came
//! first. A single post-processing pass recomputes the mappings against
//! the final node set but does not remove the dependence.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::clusters::{build_label_space, collect_bitstrings, BitString, LabelSpace};
use crate::model::{TreeCollection, TreeError, TreeId, VertexId};
use crate::tag::{build_tag, NodeId, ProvenanceEdge};

/// Graph produced by the procedural construction.
///
/// Node 0 is the full taxon set and nodes `1..=n` are the singletons in
/// label-space order; later nodes appear in creation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcTag {
    space: LabelSpace,
    nodes: Vec<BitString>,
    index: BTreeMap<BitString, NodeId>,
    edges: Vec<ProvenanceEdge>,
    /// `[tree id][vertex]`, each list sorted.
    mapping: Vec<Vec<Vec<NodeId>>>,
    insertion_order: Vec<TreeId>,
}

impl ProcTag {
    fn initial(space: LabelSpace, k: usize) -> Self {
        let n = space.len();
        let mut tag = ProcTag {
            nodes: Vec::new(),
            index: BTreeMap::new(),
            edges: Vec::new(),
            mapping: vec![Vec::new(); k],
            insertion_order: Vec::new(),
            space,
        };
        tag.add_node(BitString::ones_of_width(n));
        for i in 0..n {
            tag.add_node(BitString::singleton(n, i));
        }
        tag
    }

    fn add_node(&mut self, bits: BitString) -> NodeId {
        if let Some(&id) = self.index.get(&bits) {
            return id;
        }
        let id = NodeId(self.nodes.len());
        self.index.insert(bits.clone(), id);
        self.nodes.push(bits);
        id
    }

    pub fn space(&self) -> &LabelSpace {
        &self.space
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn bits(&self, id: NodeId) -> &BitString {
        &self.nodes[id.0]
    }

    pub fn find(&self, bits: &BitString) -> Option<NodeId> {
        self.index.get(bits).copied()
    }

    pub fn contains_cluster(&self, bits: &BitString) -> bool {
        self.index.contains_key(bits)
    }

    /// Distinct node clusters.
    pub fn node_set(&self) -> BTreeSet<BitString> {
        self.index.keys().cloned().collect()
    }

    pub fn edges(&self) -> &[ProvenanceEdge] {
        &self.edges
    }

    /// Nodes that vertex `v` of tree `tree` is mapped to.
    pub fn mapping_of(&self, tree: TreeId, v: VertexId) -> &[NodeId] {
        &self.mapping[tree.0][v]
    }

    pub fn insertion_order(&self) -> &[TreeId] {
        &self.insertion_order
    }

    /// Edges as sorted `(source cluster, target cluster, tree)` triples, a
    /// form independent of node numbering.
    pub fn edge_signature(&self) -> Vec<(BitString, BitString, TreeId)> {
        let mut sig: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                (
                    self.bits(e.source).clone(),
                    self.bits(e.target).clone(),
                    e.tree,
                )
            })
            .collect();
        sig.sort_unstable();
        sig
    }

    /// Same node clusters and same edge multiset.
    pub fn same_graph(&self, other: &ProcTag) -> bool {
        self.node_set() == other.node_set() && self.edge_signature() == other.edge_signature()
    }

    /// Nodes whose cluster contains `cluster` and avoids every other taxon of
    /// `leaves`.
    fn qualifying(&self, cluster: &BitString, leaves: &BitString) -> Vec<NodeId> {
        let outside = leaves.and_not(cluster);
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                cluster.intersects(f) && !outside.intersects(f) && cluster.is_subset_of(f)
            })
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    /// Drops every candidate with an edge into another candidate, keeping the
    /// lowest node of each chain.
    fn prune(&self, candidates: Vec<NodeId>, arcs: &BTreeSet<(NodeId, NodeId)>) -> Vec<NodeId> {
        let kept: Vec<NodeId> = candidates
            .iter()
            .copied()
            .filter(|&u| !candidates.iter().any(|&w| w != u && arcs.contains(&(u, w))))
            .collect();
        debug_assert!(!kept.is_empty() || candidates.is_empty());
        kept
    }

    fn arcs(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    fn push_tree_edges(&mut self, collection: &TreeCollection, id: TreeId) {
        let tree = collection.get(id);
        for y in tree.postorder() {
            for &x in tree.children(y) {
                for &a in &self.mapping[id.0][y] {
                    for &b in &self.mapping[id.0][x] {
                        self.edges.push(ProvenanceEdge {
                            source: a,
                            target: b,
                            tree: id,
                            parent_vertex: y,
                            child_vertex: x,
                        });
                    }
                }
            }
        }
    }
}

/// Runs the procedural construction over the trees of `collection` in
/// `order`.
pub fn build_smith_tag(
    collection: &TreeCollection,
    order: &[TreeId],
) -> Result<ProcTag, TreeError> {
    // validates the permutation
    collection.reordered(order)?;

    let space = build_label_space(collection);
    let mut tag = ProcTag::initial(space, collection.len());
    let mut arcs = BTreeSet::new();

    for &id in order {
        let tree = collection.get(id);
        let strings = collect_bitstrings(tree, &tag.space).expect("label space covers every taxon");
        let leaves = strings
            .last()
            .expect("post-order ends at the root")
            .1
            .clone();
        let mut mapping = vec![Vec::new(); tree.vertex_count()];
        for (v, cluster) in &strings {
            mapping[*v] = if tree.is_leaf(*v) {
                vec![tag
                    .find(cluster)
                    .expect("singleton nodes exist from the start")]
            } else {
                let candidates = tag.qualifying(cluster, &leaves);
                if candidates.is_empty() {
                    vec![tag.add_node(cluster.clone())]
                } else {
                    let mut kept = tag.prune(candidates, &arcs);
                    kept.sort_unstable();
                    kept
                }
            };
        }
        tag.mapping[id.0] = mapping;
        let before = tag.edges.len();
        tag.push_tree_edges(collection, id);
        arcs.extend(tag.edges[before..].iter().map(|e| (e.source, e.target)));
        tag.insertion_order.push(id);
    }
    Ok(tag)
}

/// A vertex whose mapping changed during post-processing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remap {
    pub tree: TreeId,
    pub vertex: VertexId,
    pub before: Vec<NodeId>,
    pub after: Vec<NodeId>,
}

/// One pass recomputing each internal vertex's mapping against the final
/// node set. Edges of outdated mappings are dropped and edges of the new
/// ones added. Returns the updated graph and the vertices that changed.
pub fn post_process(tag: &ProcTag, collection: &TreeCollection) -> (ProcTag, Vec<Remap>) {
    let mut out = tag.clone();
    let arcs = tag.arcs();
    let mut changes = Vec::new();

    for &id in &tag.insertion_order {
        let tree = collection.get(id);
        let strings = collect_bitstrings(tree, &tag.space).expect("label space covers every taxon");
        let leaves = strings
            .last()
            .expect("post-order ends at the root")
            .1
            .clone();
        for (v, cluster) in &strings {
            if tree.is_leaf(*v) {
                continue;
            }
            let candidates = tag.qualifying(cluster, &leaves);
            let mut after = tag.prune(candidates, &arcs);
            after.sort_unstable();
            let before = &tag.mapping[id.0][*v];
            if !after.is_empty() && &after != before {
                changes.push(Remap {
                    tree: id,
                    vertex: *v,
                    before: before.clone(),
                    after: after.clone(),
                });
                out.mapping[id.0][*v] = after;
            }
        }
    }

    if !changes.is_empty() {
        out.edges.clear();
        for &id in &tag.insertion_order {
            out.push_tree_edges(collection, id);
        }
    }
    (out, changes)
}

type EdgeSignature = Vec<(BitString, BitString, TreeId)>;

/// Procedural graphs that share one node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderGroup {
    /// Sorted.
    pub nodes: Vec<BitString>,
    pub orders: Vec<Vec<TreeId>>,
    /// Number of distinct edge multisets among the group's graphs.
    pub distinct_graphs: usize,
    /// Node set equals that of the order-independent TAG.
    pub matches_tag: bool,
}

/// Procedural graphs grouped by node set over several input orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDependence {
    pub space: LabelSpace,
    /// Node set of the order-independent TAG, sorted.
    pub tag_nodes: Vec<BitString>,
    pub groups: Vec<OrderGroup>,
    pub post_processed: bool,
}

impl OrderDependence {
    pub fn distinct_node_sets(&self) -> usize {
        self.groups.len()
    }

    /// Some order produced a node set different from the TAG's.
    pub fn differs_from_tag(&self) -> bool {
        self.groups.iter().any(|g| !g.matches_tag)
    }
}

/// Builds the procedural graph for each order (post-processed when
/// `post` is set) and groups the results by node set, in order of first
/// appearance.
pub fn compare_orders(
    collection: &TreeCollection,
    orders: &[Vec<TreeId>],
    post: bool,
) -> Result<OrderDependence, TreeError> {
    let tag = build_tag(collection);
    let tag_nodes: Vec<BitString> = tag.nodes().iter().map(|n| n.bits.clone()).collect();

    let mut groups: Vec<(OrderGroup, Vec<EdgeSignature>)> = Vec::new();
    for order in orders {
        let mut proc = build_smith_tag(collection, order)?;
        if post {
            proc = post_process(&proc, collection).0;
        }
        let nodes: Vec<BitString> = proc.node_set().into_iter().collect();
        let signature = proc.edge_signature();
        match groups.iter_mut().find(|(g, _)| g.nodes == nodes) {
            Some((group, signatures)) => {
                group.orders.push(order.clone());
                if !signatures.contains(&signature) {
                    signatures.push(signature);
                    group.distinct_graphs += 1;
                }
            }
            None => {
                let matches_tag = nodes == tag_nodes;
                groups.push((
                    OrderGroup {
                        nodes,
                        orders: vec![order.clone()],
                        distinct_graphs: 1,
                        matches_tag,
                    },
                    vec![signature],
                ));
            }
        }
    }

    Ok(OrderDependence {
        space: tag.space().clone(),
        tag_nodes,
        groups: groups.into_iter().map(|(g, _)| g).collect(),
        post_processed: post,
    })
}

/// All orderings of `k` tree ids, lexicographically.
pub fn all_orders(k: usize) -> Vec<Vec<TreeId>> {
    let mut current: Vec<TreeId> = (0..k).map(TreeId).collect();
    let mut out = vec![current.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..k)
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .expect("a larger element exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}
