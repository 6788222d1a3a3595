//! Compatibility testing and supertree construction on the extended TAG.
//!
//! The extended TAG adds an undirected edge between every two nodes whose
//! clusters are siblings in some input tree. [`descendant`] peels off the
//! nodes that have no incoming arcs and no sibling edges, splits what is
//! left into arc components (connected through arcs only), and recurses.
//! If at some level nothing can be peeled, the trees are incompatible.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::clusters::{collect_bitstrings, BitString, LabelSpace};
use crate::model::{PhyloTree, TreeCollection, TreeId, VertexId};
use crate::tag::{build_tag, NodeId, SimpleDigraph, Tag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompatError {
    #[error("leaf `{0}` of the displayed tree is missing from the supertree")]
    LeafSetNotContained(String),
    #[error("internal error: supertree does not display input tree {0}")]
    DisplaysCheckFailed(TreeId),
}

/// Mixed graph: the TAG's simple view plus undirected sibling edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedTag {
    directed: SimpleDigraph,
    undirected: Vec<Vec<NodeId>>,
    labels: Vec<Option<String>>,
}

/// Adds sibling edges to the simple view of `tag`.
///
/// Siblings are read from the provenance edges: targets of edges sharing a
/// tree id and parent vertex are children of one vertex.
pub fn build_extended_tag(tag: &Tag) -> ExtendedTag {
    let mut by_parent: Vec<(TreeId, VertexId, NodeId)> = tag
        .edges()
        .iter()
        .map(|e| (e.tree, e.parent_vertex, e.target))
        .collect();
    by_parent.sort_unstable();

    let mut undirected = vec![Vec::new(); tag.node_count()];
    for group in by_parent.chunk_by(|a, b| (a.0, a.1) == (b.0, b.1)) {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                undirected[a.2 .0].push(b.2);
                undirected[b.2 .0].push(a.2);
            }
        }
    }
    for list in &mut undirected {
        list.sort_unstable();
        list.dedup();
    }

    ExtendedTag {
        directed: tag.simple_view(),
        undirected,
        labels: tag
            .node_ids()
            .map(|id| tag.leaf_name(id).map(String::from))
            .collect(),
    }
}

impl ExtendedTag {
    /// Builds a mixed graph directly; `labels` names the leaf nodes.
    pub fn from_parts<D, U>(labels: Vec<Option<String>>, directed: D, undirected: U) -> Self
    where
        D: IntoIterator<Item = (NodeId, NodeId)>,
        U: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in undirected {
            if a != b {
                adjacency[a.0].push(b);
                adjacency[b.0].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        ExtendedTag {
            directed: SimpleDigraph::from_edges(n, directed),
            undirected: adjacency,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn directed(&self) -> &SimpleDigraph {
        &self.directed
    }

    pub fn undirected_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.undirected[u.0]
    }

    /// Undirected edges as ordered pairs `(a, b)` with `a < b`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.undirected.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |b| b.0 > a)
                .map(move |&b| (NodeId(a), b))
        })
    }

    pub fn label(&self, u: NodeId) -> Option<&str> {
        self.labels[u.0].as_deref()
    }
}

/// A maximal node set connected through arcs, ignoring their direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArcComponent {
    /// Sorted.
    pub nodes: Vec<NodeId>,
}

/// Arc components of `g` restricted to `nodes`. Sibling edges never join
/// components. Components are ordered by their smallest node.
pub fn arc_components(g: &ExtendedTag, nodes: &[NodeId]) -> Vec<ArcComponent> {
    let mut member = vec![false; g.node_count()];
    for &u in nodes {
        member[u.0] = true;
    }
    components_within(g, nodes, &mut member)
}

/// Consumes the `member` marks of the nodes it visits.
fn components_within(g: &ExtendedTag, nodes: &[NodeId], member: &mut [bool]) -> Vec<ArcComponent> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for &start in &sorted {
        if !member[start.0] {
            continue;
        }
        member[start.0] = false;
        stack.push(start);
        let mut component = Vec::new();
        while let Some(u) = stack.pop() {
            component.push(u);
            let near = g
                .directed
                .successors(u)
                .iter()
                .chain(g.directed.predecessors(u));
            for &v in near {
                if member[v.0] {
                    member[v.0] = false;
                    stack.push(v);
                }
            }
        }
        component.sort_unstable();
        components.push(ArcComponent { nodes: component });
    }
    components
}

/// Certificate of incompatibility: a sub-mixed graph in which every node
/// has an incoming arc or a sibling edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotCompatible {
    /// Sorted.
    pub stuck: Vec<NodeId>,
}

enum Shape {
    Leaf(String),
    Internal(Vec<Shape>),
}

struct Descent<'a> {
    g: &'a ExtendedTag,
    /// Id of the call currently owning each node, or `usize::MAX`.
    owner: Vec<usize>,
    calls: usize,
}

impl Descent<'_> {
    fn solve(&mut self, nodes: &[NodeId]) -> Result<Shape, NotCompatible> {
        let call = self.calls;
        self.calls += 1;
        for &u in nodes {
            self.owner[u.0] = call;
        }
        let inside = |owner: &[usize], v: &NodeId| owner[v.0] == call;

        let peel: Vec<NodeId> = nodes
            .iter()
            .copied()
            .filter(|&u| {
                !self
                    .g
                    .directed
                    .predecessors(u)
                    .iter()
                    .any(|v| inside(&self.owner, v))
                    && !self.g.undirected[u.0]
                        .iter()
                        .any(|v| inside(&self.owner, v))
            })
            .collect();
        if peel.is_empty() {
            let mut stuck = nodes.to_vec();
            stuck.sort_unstable();
            return Err(NotCompatible { stuck });
        }

        let is_leaf = |u: NodeId, owner: &[usize]| {
            !self
                .g
                .directed
                .successors(u)
                .iter()
                .any(|v| inside(owner, v))
        };
        let mut children = Vec::new();
        for &u in &peel {
            if is_leaf(u, &self.owner) {
                let name = self.g.labels[u.0]
                    .clone()
                    .expect("out-degree-zero nodes are taxa");
                if peel.len() == 1 && nodes.len() == 1 {
                    return Ok(Shape::Leaf(name));
                }
                children.push(Shape::Leaf(name));
            }
        }
        for &u in &peel {
            self.owner[u.0] = usize::MAX;
        }

        let rest: Vec<NodeId> = nodes
            .iter()
            .copied()
            .filter(|u| self.owner[u.0] == call)
            .collect();
        let mut member = vec![false; self.g.node_count()];
        for &u in &rest {
            member[u.0] = true;
        }
        for component in components_within(self.g, &rest, &mut member) {
            children.push(self.solve(&component.nodes)?);
        }
        Ok(Shape::Internal(children))
    }
}

fn shape_to_tree(shape: Shape) -> PhyloTree {
    let mut children: Vec<Vec<VertexId>> = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    // (shape, parent vertex)
    let mut stack = vec![(shape, None::<VertexId>)];
    while let Some((shape, parent)) = stack.pop() {
        match shape {
            Shape::Internal(mut kids) if kids.len() == 1 => {
                stack.push((kids.pop().expect("one child"), parent));
            }
            shape => {
                let v = children.len();
                children.push(Vec::new());
                if let Some(p) = parent {
                    children[p].push(v);
                }
                match shape {
                    Shape::Leaf(name) => labels.push(Some(name)),
                    Shape::Internal(kids) => {
                        labels.push(None);
                        stack.extend(kids.into_iter().rev().map(|k| (k, Some(v))));
                    }
                }
            }
        }
    }
    PhyloTree::from_parts(0, children, labels).expect("descendant output is a phylogenetic tree")
}

/// Returns a tree displaying every input tree behind `g`, or the stuck
/// node set if the inputs are incompatible.
pub fn descendant(g: &ExtendedTag) -> Result<PhyloTree, NotCompatible> {
    let mut run = Descent {
        g,
        owner: vec![usize::MAX; g.node_count()],
        calls: 0,
    };
    let all: Vec<NodeId> = (0..g.node_count()).map(NodeId).collect();
    run.solve(&all).map(shape_to_tree)
}

fn cluster_set(tree: &PhyloTree, space: &LabelSpace) -> Result<BTreeSet<BitString>, CompatError> {
    collect_bitstrings(tree, space)
        .map(|all| all.into_iter().map(|(_, b)| b).collect())
        .map_err(|e| CompatError::LeafSetNotContained(e.0))
}

/// True iff `supertree`, restricted to the leaves of `tree` with degree-two
/// vertices suppressed, refines `tree`.
///
/// Every cluster of `tree` must equal the intersection of some supertree
/// cluster with the leaf set of `tree`.
pub fn displays(supertree: &PhyloTree, tree: &PhyloTree) -> Result<bool, CompatError> {
    let space = LabelSpace::from_names(supertree.taxa());
    let wanted = cluster_set(tree, &space)?;
    let leaves = wanted
        .iter()
        .max_by_key(|b| b.count_ones())
        .expect("a tree has at least one cluster")
        .clone();
    let restricted: BTreeSet<BitString> = cluster_set(supertree, &space)?
        .into_iter()
        .map(|c| c.and(&leaves))
        .filter(|c| !c.is_zero())
        .collect();
    Ok(wanted.is_subset(&restricted))
}

/// Outcome of [`check_compatibility`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compatibility {
    Compatible(PhyloTree),
    /// Clusters of the stuck node set, each as sorted taxon names.
    NotCompatible {
        stuck: Vec<Vec<String>>,
    },
}

/// Builds the TAG and its extension, runs [`descendant`], and checks that a
/// returned supertree displays every input tree.
pub fn check_compatibility(collection: &TreeCollection) -> Result<Compatibility, CompatError> {
    let tag = build_tag(collection);
    let extended = build_extended_tag(&tag);
    match descendant(&extended) {
        Ok(tree) => {
            for (id, input) in collection.iter() {
                if !displays(&tree, input)? {
                    return Err(CompatError::DisplaysCheckFailed(id));
                }
            }
            Ok(Compatibility::Compatible(tree))
        }
        Err(NotCompatible { stuck }) => Ok(Compatibility::NotCompatible {
            stuck: stuck
                .iter()
                .map(|&u| tag.cluster_names(u).into_iter().map(String::from).collect())
                .collect(),
        }),
    }
}
