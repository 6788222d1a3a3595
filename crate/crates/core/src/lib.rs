//! Tree alignment graphs (TAGs) over collections of rooted phylogenetic trees.
//!
//! The TAG holds one node per distinct cluster found in the input trees and
//! one directed edge per input-tree edge, tagged with the tree it came from.
//! Its construction does not depend on the order of the input trees. On top
//! of it this crate computes strict, majority-rule and threshold consensus
//! trees, decides compatibility of trees with partially overlapping leaf
//! sets (returning a supertree when one exists), and reproduces the older
//! order-dependent procedural TAG for comparison.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, JSON and the
//! command line live in the `phylotag-tools` crate.

#![no_std]

extern crate alloc;

pub mod clusters;
pub mod compat;
pub mod consensus;
pub mod model;
pub mod smithtag;
pub mod tag;

pub use clusters::{build_label_space, collect_bitstrings, sort_dedup, BitString, LabelSpace};
pub use compat::{
    build_extended_tag, check_compatibility, descendant, displays, ArcComponent, CompatError,
    Compatibility, ExtendedTag, NotCompatible,
};
pub use consensus::{
    consensus_parents, majority_rule_tree, strict_consensus_tree, threshold_consensus,
    ConsensusError, ConsensusParents, ConsensusTree, Selection,
};
pub use model::{
    clusters_of, parse_newick, serialize_newick, NewickError, PhyloTree, TreeCollection, TreeError,
    TreeId, VertexId,
};
pub use smithtag::{build_smith_tag, post_process, ProcTag};
pub use tag::{
    assert_acyclic, build_tag, export_dot, simple_view, tag_root, NodeId, ProvenanceEdge,
    SimpleDigraph, Tag, TagError, TagNode,
};
