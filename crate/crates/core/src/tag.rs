//! The order-independent tree alignment graph.
//!
//! Nodes are the distinct clusters of the input trees, numbered in sorted
//! bit-string order. Every edge of every input tree becomes exactly one
//! directed edge from the parent's cluster node to the child's, tagged with
//! the tree id and the two tree vertices. Because node numbering and edge
//! order are both derived from cluster content and tree ids, reordering the
//! input collection yields an identical graph.

use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt::{self, Write};

use thiserror::Error;

use crate::clusters::{build_label_space, collect_bitstrings, sort_dedup, BitString, LabelSpace};
use crate::model::{TreeCollection, TreeId, VertexId};

/// Index of a TAG node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagNode {
    pub bits: BitString,
    /// Number of taxa in the cluster.
    pub cardinality: usize,
    /// Number of input trees containing the cluster.
    pub count: usize,
}

/// One input-tree edge, as recorded in the TAG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProvenanceEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub tree: TreeId,
    pub parent_vertex: VertexId,
    pub child_vertex: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("input trees do not share one leaf set ({} nodes have in-degree zero)", in_degree_zero.len())]
    NotCommonLeafSet { in_degree_zero: Vec<NodeId> },
}

/// Tree alignment graph of a tree collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tag {
    space: LabelSpace,
    nodes: Vec<TagNode>,
    edges: Vec<ProvenanceEdge>,
    /// Indexed by tree id: the node of each vertex.
    vertex_nodes: Vec<Vec<NodeId>>,
    tree_roots: Vec<NodeId>,
}

/// Builds the TAG of `collection`.
///
/// Collects the bit-string of every vertex of every tree, radix-sorts and
/// deduplicates them into the node list, then maps each tree edge to its
/// node pair.
pub fn build_tag(collection: &TreeCollection) -> Tag {
    let space = build_label_space(collection);
    let k = collection.len();

    let mut per_tree: Vec<(TreeId, Vec<(VertexId, BitString)>)> = Vec::with_capacity(k);
    let mut all = Vec::new();
    for (id, tree) in collection.iter() {
        let strings = collect_bitstrings(tree, &space).expect("label space covers every taxon");
        all.extend(strings.iter().map(|(_, b)| b.clone()));
        per_tree.push((id, strings));
    }
    let unique = sort_dedup(all);

    let mut nodes: Vec<TagNode> = unique
        .into_iter()
        .map(|bits| TagNode {
            cardinality: bits.count_ones(),
            bits,
            count: 0,
        })
        .collect();

    let mut vertex_nodes = vec![Vec::new(); k];
    let mut tree_roots = vec![NodeId(0); k];
    let mut edges = Vec::new();
    for (id, strings) in per_tree {
        let tree = collection.get(id);
        let mut map = vec![NodeId(0); tree.vertex_count()];
        for (v, bits) in &strings {
            let at = nodes
                .binary_search_by(|node| node.bits.cmp(bits))
                .expect("every vertex bit-string is a node");
            map[*v] = NodeId(at);
            // clusters are distinct within one tree, so this is a per-tree tally
            nodes[at].count += 1;
        }
        for (v, _) in &strings {
            for &c in tree.children(*v) {
                edges.push(ProvenanceEdge {
                    source: map[*v],
                    target: map[c],
                    tree: id,
                    parent_vertex: *v,
                    child_vertex: c,
                });
            }
        }
        tree_roots[id.0] = map[tree.root()];
        vertex_nodes[id.0] = map;
    }
    edges.sort_unstable();

    Tag {
        space,
        nodes,
        edges,
        vertex_nodes,
        tree_roots,
    }
}

impl Tag {
    pub fn space(&self) -> &LabelSpace {
        &self.space
    }

    /// `n`, the number of taxa.
    pub fn taxon_count(&self) -> usize {
        self.space.len()
    }

    /// `k`, the number of trees the TAG was built from.
    pub fn tree_count(&self) -> usize {
        self.tree_roots.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[TagNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &TagNode {
        &self.nodes[id.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn bits(&self, id: NodeId) -> &BitString {
        &self.nodes[id.0].bits
    }

    pub fn count(&self, id: NodeId) -> usize {
        self.nodes[id.0].count
    }

    pub fn cardinality(&self, id: NodeId) -> usize {
        self.nodes[id.0].cardinality
    }

    /// All provenance edges, sorted by (source, target, tree, vertices).
    pub fn edges(&self) -> &[ProvenanceEdge] {
        &self.edges
    }

    pub fn find(&self, bits: &BitString) -> Option<NodeId> {
        self.nodes
            .binary_search_by(|node| node.bits.cmp(bits))
            .ok()
            .map(NodeId)
    }

    pub fn node_of_vertex(&self, tree: TreeId, v: VertexId) -> NodeId {
        self.vertex_nodes[tree.0][v]
    }

    pub fn tree_root(&self, tree: TreeId) -> NodeId {
        self.tree_roots[tree.0]
    }

    /// Taxon name of a singleton node.
    pub fn leaf_name(&self, id: NodeId) -> Option<&str> {
        let node = &self.nodes[id.0];
        if node.cardinality == 1 {
            node.bits.ones().next().map(|i| self.space.name(i))
        } else {
            None
        }
    }

    /// Taxon names in the node's cluster, in index order.
    pub fn cluster_names(&self, id: NodeId) -> Vec<&str> {
        self.space.decode(&self.nodes[id.0].bits).collect()
    }

    /// The TAG with parallel edges merged.
    pub fn simple_view(&self) -> SimpleDigraph {
        SimpleDigraph::from_edges(
            self.nodes.len(),
            self.edges.iter().map(|e| (e.source, e.target)),
        )
    }
}

/// Collapses parallel edges of `tag`.
pub fn simple_view(tag: &Tag) -> SimpleDigraph {
    tag.simple_view()
}

/// True iff `tag` has no directed cycle.
pub fn assert_acyclic(tag: &Tag) -> bool {
    tag.simple_view().is_acyclic()
}

/// The unique node of in-degree zero, present when all trees share a leaf
/// set. Its cluster is the whole label space.
pub fn tag_root(tag: &Tag) -> Result<NodeId, TagError> {
    let first = tag.tree_roots[0];
    if tag.tree_roots.iter().all(|&r| r == first) {
        return Ok(first);
    }
    let view = tag.simple_view();
    Err(TagError::NotCommonLeafSet {
        in_degree_zero: view.sources(),
    })
}

/// A directed graph without parallel edges, with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleDigraph {
    successors: Vec<Vec<NodeId>>,
    predecessors: Vec<Vec<NodeId>>,
}

impl SimpleDigraph {
    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut successors = vec![Vec::new(); node_count];
        let mut predecessors = vec![Vec::new(); node_count];
        for (u, v) in edges {
            successors[u.0].push(v);
            predecessors[v.0].push(u);
        }
        for list in successors.iter_mut().chain(predecessors.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        SimpleDigraph {
            successors,
            predecessors,
        }
    }

    pub fn node_count(&self) -> usize {
        self.successors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (NodeId(u), v)))
    }

    pub fn successors(&self, u: NodeId) -> &[NodeId] {
        &self.successors[u.0]
    }

    pub fn predecessors(&self, u: NodeId) -> &[NodeId] {
        &self.predecessors[u.0]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.successors[u.0].binary_search(&v).is_ok()
    }

    /// Nodes with in-degree zero, in id order.
    pub fn sources(&self) -> Vec<NodeId> {
        (0..self.node_count())
            .filter(|&u| self.predecessors[u].is_empty())
            .map(NodeId)
            .collect()
    }

    /// Kahn's algorithm, always taking the smallest available id next.
    /// `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut indegree: Vec<usize> = self.predecessors.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<NodeId>> =
            self.sources().into_iter().map(Reverse).collect();
        let mut order = Vec::with_capacity(self.node_count());
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for &v in &self.successors[u.0] {
                indegree[v.0] -= 1;
                if indegree[v.0] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        (order.len() == self.node_count()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

const PALETTE: [&str; 8] = [
    "black",
    "blue",
    "red",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "cyan4",
];

fn tree_color(tree: TreeId, k: usize) -> String {
    if k <= PALETTE.len() {
        String::from(PALETTE[tree.0])
    } else {
        let mut s = String::new();
        let _ = write!(s, "{:.3} 0.800 0.750", tree.0 as f64 / k as f64);
        s
    }
}

fn escape(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Graphviz rendering of `tag`, one edge color per input tree.
///
/// Singleton nodes show their taxon; other nodes list their cluster when
/// there are at most 32 taxa and their node id otherwise.
pub fn export_dot(tag: &Tag) -> String {
    let k = tag.tree_count();
    let mut out = String::new();
    out.push_str("digraph TAG {\n");
    out.push_str("  node [shape=ellipse];\n");
    for id in tag.node_ids() {
        let label = match tag.leaf_name(id) {
            Some(name) => escape(name),
            None if tag.taxon_count() <= 32 => escape(&tag.cluster_names(id).join(",")),
            None => {
                let mut s = String::new();
                let _ = write!(s, "node {id}");
                s
            }
        };
        let shape = if tag.cardinality(id) == 1 {
            ", shape=circle"
        } else {
            ""
        };
        let _ = writeln!(out, "  n{id} [label=\"{label}\"{shape}];");
    }
    for e in tag.edges() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [color=\"{}\", tooltip=\"tree {}\"];",
            e.source,
            e.target,
            tree_color(e.tree, k),
            e.tree
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_newick;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn three_trees() -> TreeCollection {
        parse_newick("((a,b,c),d);\n((a,b,d),c);\n((a,b),e);").unwrap()
    }

    fn names(tag: &Tag, id: NodeId) -> String {
        tag.cluster_names(id).join("")
    }

    #[test]
    fn three_tree_tag_nodes_and_edges() {
        let tag = build_tag(&three_trees());
        assert_eq!(tag.node_count(), 10);
        let clusters: BTreeSet<String> = tag.node_ids().map(|id| names(&tag, id)).collect();
        let want: BTreeSet<String> = ["a", "b", "c", "d", "e", "ab", "abc", "abd", "abe", "abcd"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(clusters, want);
        // one edge per input-tree edge: 5 + 5 + 4
        assert_eq!(tag.edges().len(), 14);
        for (tree, expected) in [(0, 5), (1, 5), (2, 4)] {
            assert_eq!(
                tag.edges()
                    .iter()
                    .filter(|e| e.tree == TreeId(tree))
                    .count(),
                expected
            );
        }
        // a and b are in every tree, c and d in two, e in one
        let count_of = |s: &str| {
            let bits = tag.space().encode(s.split(',')).unwrap();
            tag.count(tag.find(&bits).unwrap())
        };
        assert_eq!(count_of("a"), 3);
        assert_eq!(count_of("c"), 2);
        assert_eq!(count_of("e"), 1);
        assert_eq!(count_of("a,b"), 1);
        assert_eq!(count_of("a,b,c,d"), 2);
        assert!(assert_acyclic(&tag));
    }

    #[test]
    fn edges_point_to_proper_subsets() {
        let tag = build_tag(&three_trees());
        for e in tag.edges() {
            assert!(tag.bits(e.target).is_proper_subset_of(tag.bits(e.source)));
        }
    }

    #[test]
    fn single_tree_is_isomorphic_to_itself() {
        let c = parse_newick("((a,b),(c,(d,e)));").unwrap();
        let tree = c.get(TreeId(0));
        let tag = build_tag(&c);
        assert_eq!(tag.node_count(), tree.vertex_count());
        assert_eq!(tag.edges().len(), tree.edge_count());
        assert_eq!(tag.simple_view().edge_count(), tree.edge_count());
        assert!(tag.nodes().iter().all(|n| n.count == 1));
    }

    #[test]
    fn identical_trees_collapse() {
        let c = parse_newick("((a,b),(c,d));\n((c,d),(b,a));").unwrap();
        let tag = build_tag(&c);
        assert_eq!(tag.node_count(), 7);
        assert!(tag.nodes().iter().all(|n| n.count == 2));
        assert_eq!(tag.edges().len(), 12);
        assert_eq!(tag.simple_view().edge_count(), 6);
    }

    #[test]
    fn simple_view_of_three_trees_keeps_all_edges() {
        let tag = build_tag(&three_trees());
        assert_eq!(tag.simple_view().edge_count(), tag.edges().len());
    }

    #[test]
    fn simple_view_of_sibling_pair_has_distinct_sources() {
        let c = parse_newick("((a,b),c);\n((a,b),d);").unwrap();
        let tag = build_tag(&c);
        let view = tag.simple_view();
        let ab = tag.find(&tag.space().encode(["a", "b"]).unwrap()).unwrap();
        assert_eq!(view.predecessors(ab).len(), 2);
        assert_eq!(view.edge_count(), 6);
    }

    #[test]
    fn two_cycle_is_detected() {
        let g = SimpleDigraph::from_edges(2, [(NodeId(0), NodeId(1)), (NodeId(1), NodeId(0))]);
        assert!(!g.is_acyclic());
        let g = SimpleDigraph::from_edges(2, [(NodeId(0), NodeId(1))]);
        assert_eq!(g.topological_order(), Some(vec![NodeId(0), NodeId(1)]));
    }

    #[test]
    fn root_of_common_leaf_set() {
        let c = parse_newick("((a,b),(c,d));\n(((a,c),b),d);\n(a,b,c,d);").unwrap();
        let tag = build_tag(&c);
        let root = tag_root(&tag).unwrap();
        assert_eq!(tag.bits(root).to_string(), "1111");
        assert_eq!(tag.simple_view().sources(), vec![root]);

        let single = build_tag(&parse_newick("((x,y),z);").unwrap());
        assert_eq!(tag_root(&single).unwrap(), single.tree_root(TreeId(0)));
    }

    #[test]
    fn root_fails_on_three_trees() {
        let tag = build_tag(&three_trees());
        match tag_root(&tag) {
            Err(TagError::NotCommonLeafSet { in_degree_zero }) => {
                let got: BTreeSet<String> =
                    in_degree_zero.iter().map(|&id| names(&tag, id)).collect();
                let want: BTreeSet<String> =
                    ["abcd", "abe"].iter().map(|s| s.to_string()).collect();
                assert_eq!(got, want);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn root_fails_on_nested_leaf_sets() {
        // one in-degree-zero node, but the leaf sets still differ
        let tag = build_tag(&parse_newick("((a,b),c);\n(a,b);").unwrap());
        assert_eq!(tag.simple_view().sources().len(), 1);
        assert!(tag_root(&tag).is_err());
    }

    #[test]
    fn dot_export_of_three_trees() {
        let dot = export_dot(&build_tag(&three_trees()));
        assert!(dot.starts_with("digraph TAG {"));
        assert_eq!(dot.matches(" [label=").count(), 10);
        assert_eq!(dot.matches(" -> ").count(), 14);
        let colors: BTreeSet<&str> = dot
            .lines()
            .filter(|l| l.contains(" -> "))
            .map(|l| {
                l.split("color=\"")
                    .nth(1)
                    .unwrap()
                    .split('"')
                    .next()
                    .unwrap()
            })
            .collect();
        assert_eq!(colors.len(), 3);
        assert!(dot.contains("[label=\"a,b,c,d\"]"));
        assert!(dot.contains("[label=\"e\", shape=circle]"));
    }

    #[test]
    fn dot_export_of_single_leaf() {
        let dot = export_dot(&build_tag(&parse_newick("a;").unwrap()));
        assert_eq!(dot.matches(" [label=").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), 0);
    }

    #[test]
    fn dot_labels_large_clusters_by_id() {
        let names: Vec<String> = (0..40).map(|i| alloc::format!("t{i:02}")).collect();
        let text = alloc::format!("({});", names.join(","));
        let tag = build_tag(&parse_newick(&text).unwrap());
        let dot = export_dot(&tag);
        assert!(dot.contains("[label=\"node 40\"]"));
    }
}
