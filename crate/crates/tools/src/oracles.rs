//! Brute-force reference implementations used by the test suites.
//!
//! Nothing here touches the TAG. Clusters are plain `BTreeSet`s or `u32`
//! masks, and compatibility is decided by enumerating every rooted tree on
//! the combined leaf set.

use std::collections::{BTreeMap, BTreeSet};

use phylotag::{PhyloTree, TreeCollection, VertexId};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest leaf set [`TopologyEnumerator`] accepts.
pub const MAX_ENUMERATED_TAXA: usize = 8;
/// Largest leaf set [`brute_compat`] accepts.
pub const MAX_BRUTE_COMPAT_TAXA: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("leaf set of {taxa} taxa exceeds the oracle bound of {bound}")]
    TooManyTaxa { taxa: usize, bound: usize },
    #[error("input trees do not share one leaf set")]
    LeafSetsDiffer,
    #[error("no input trees")]
    NoTrees,
}

/// Consensus flavour for [`naive_consensus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsensusMode {
    Strict,
    Majority,
}

/// A rooted tree as the set of its non-singleton clusters, each a bit mask
/// over leaf positions. The full set is always present once there are two
/// or more leaves.
pub type Hierarchy = Vec<u32>;

/// Iterates over every rooted phylogenetic tree (multifurcations included)
/// on a fixed leaf set, each exactly once.
///
/// Trees on leaves `0..=i` are grown from trees on `0..i` by inserting leaf
/// `i` either as a new child of an existing internal vertex or on a new
/// vertex subdividing the edge above an existing vertex (or above the
/// root). Deleting leaf `i` and suppressing the unary vertex undoes exactly
/// one of these moves, so nothing is produced twice.
#[derive(Debug, Clone)]
pub struct TopologyEnumerator {
    taxa: Vec<String>,
    stack: Vec<(Hierarchy, usize)>,
}

impl TopologyEnumerator {
    pub fn new<I, S>(taxa: I) -> Result<Self, OracleError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let taxa: Vec<String> = taxa.into_iter().map(Into::into).collect();
        if taxa.len() > MAX_ENUMERATED_TAXA {
            return Err(OracleError::TooManyTaxa {
                taxa: taxa.len(),
                bound: MAX_ENUMERATED_TAXA,
            });
        }
        let stack = match taxa.len() {
            0 => Vec::new(),
            1 => vec![(Vec::new(), 1)],
            _ => vec![(vec![0b11], 2)],
        };
        Ok(TopologyEnumerator { taxa, stack })
    }

    pub fn taxa(&self) -> &[String] {
        &self.taxa
    }

    /// Next topology as a cluster hierarchy.
    pub fn next_hierarchy(&mut self) -> Option<Hierarchy> {
        loop {
            let (h, placed) = self.stack.pop()?;
            if placed == self.taxa.len() {
                return Some(h);
            }
            let mut grown = insertions(&h, placed);
            // keep the output order stable: first generated comes out first
            grown.reverse();
            self.stack
                .extend(grown.into_iter().map(|g| (g, placed + 1)));
        }
    }
}

impl Iterator for TopologyEnumerator {
    type Item = PhyloTree;

    fn next(&mut self) -> Option<PhyloTree> {
        let h = self.next_hierarchy()?;
        Some(hierarchy_to_tree(&h, &self.taxa))
    }
}

fn insertions(h: &Hierarchy, x: usize) -> Vec<Hierarchy> {
    let bit = 1u32 << x;
    let mut out = Vec::new();
    // new child of an internal vertex
    for &c in h {
        let mut g: Hierarchy = h
            .iter()
            .map(|&d| if d & c == c { d | bit } else { d })
            .collect();
        g.sort_unstable();
        out.push(g);
    }
    // subdivide the edge above a vertex (internal or leaf, root included)
    let vertices = h.iter().copied().chain((0..x).map(|i| 1u32 << i));
    for c in vertices {
        let mut g: Hierarchy = h
            .iter()
            .map(|&d| if d & c == c && d != c { d | bit } else { d })
            .collect();
        g.push(c | bit);
        g.sort_unstable();
        out.push(g);
    }
    out
}

/// Builds the tree whose non-singleton clusters are `h`, over `taxa`.
pub fn hierarchy_to_tree(h: &[u32], taxa: &[String]) -> PhyloTree {
    if taxa.len() == 1 {
        return PhyloTree::single_leaf(taxa[0].clone());
    }
    let mut internal: Vec<u32> = h.to_vec();
    internal.sort_by_key(|c| std::cmp::Reverse(c.count_ones()));
    let n = taxa.len();
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); internal.len() + n];
    let mut labels: Vec<Option<String>> = vec![None; internal.len()];
    labels.extend(taxa.iter().cloned().map(Some));
    // smallest earlier cluster containing c is its parent
    let parent_of = |c: u32, upto: usize| -> Option<usize> {
        (0..upto)
            .rev()
            .find(|&j| internal[j] & c == c && internal[j] != c)
    };
    for (i, &c) in internal.iter().enumerate().skip(1) {
        let p = parent_of(c, i).expect("root contains every cluster");
        children[p].push(i);
    }
    for leaf in 0..n {
        let p = parent_of(1 << leaf, internal.len()).expect("root contains every leaf");
        children[p].push(internal.len() + leaf);
    }
    PhyloTree::from_parts(0, children, labels).expect("hierarchy yields a phylogenetic tree")
}

/// Non-singleton clusters of `tree` as masks over `index`.
fn masks(tree: &PhyloTree, index: &BTreeMap<&str, usize>) -> BTreeSet<u32> {
    let mut below = vec![0u32; tree.vertex_count()];
    let mut out = BTreeSet::new();
    for v in tree.postorder() {
        below[v] = match tree.label(v) {
            Some(name) => 1 << index[name],
            None => {
                let m = tree.children(v).iter().fold(0, |acc, &c| acc | below[c]);
                out.insert(m);
                m
            }
        };
    }
    out
}

/// Whether the tree with hierarchy `h` displays the tree with clusters
/// `wanted` on leaf mask `leaves`: every wanted cluster must be the
/// restriction of some cluster of `h`.
fn hierarchy_displays(h: &[u32], wanted: &BTreeSet<u32>, leaves: u32) -> bool {
    let restricted: BTreeSet<u32> = h.iter().map(|&c| c & leaves).collect();
    wanted.iter().all(|w| restricted.contains(w))
}

/// Outcome of [`brute_compat`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteCompat {
    Compatible(PhyloTree),
    NotCompatible,
}

/// Finds the first enumerated tree on the combined leaf set that displays
/// every input tree.
pub fn brute_compat(collection: &TreeCollection) -> Result<BruteCompat, OracleError> {
    let taxa: Vec<String> = collection.taxa().into_iter().map(String::from).collect();
    if taxa.len() > MAX_BRUTE_COMPAT_TAXA {
        return Err(OracleError::TooManyTaxa {
            taxa: taxa.len(),
            bound: MAX_BRUTE_COMPAT_TAXA,
        });
    }
    let index: BTreeMap<&str, usize> = taxa
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let inputs: Vec<(u32, BTreeSet<u32>)> = collection
        .trees()
        .map(|t| {
            let leaves = t.taxa().iter().fold(0, |acc, name| acc | 1 << index[name]);
            (leaves, masks(t, &index))
        })
        .collect();
    let mut topologies = TopologyEnumerator::new(taxa.iter().cloned())?;
    while let Some(h) = topologies.next_hierarchy() {
        if inputs
            .iter()
            .all(|(leaves, wanted)| hierarchy_displays(&h, wanted, *leaves))
        {
            return Ok(BruteCompat::Compatible(hierarchy_to_tree(&h, &taxa)));
        }
    }
    Ok(BruteCompat::NotCompatible)
}

fn name_clusters(tree: &PhyloTree) -> Vec<BTreeSet<String>> {
    let mut below: Vec<BTreeSet<String>> = vec![BTreeSet::new(); tree.vertex_count()];
    let mut out = Vec::new();
    for v in tree.postorder() {
        let set: BTreeSet<String> = match tree.label(v) {
            Some(name) => BTreeSet::from([name.to_string()]),
            None => tree
                .children(v)
                .iter()
                .flat_map(|&c| below[c].iter().cloned())
                .collect(),
        };
        out.push(set.clone());
        below[v] = set;
    }
    out
}

/// Cluster sets kept by strict or majority-rule consensus, counted by
/// direct set comparison. Singletons and the full set are included.
pub fn naive_consensus_clusters(
    collection: &TreeCollection,
    mode: ConsensusMode,
) -> Result<BTreeSet<BTreeSet<String>>, OracleError> {
    let k = collection.len();
    if k == 0 {
        return Err(OracleError::NoTrees);
    }
    let mut per_tree = collection.trees().map(name_clusters);
    let first = per_tree.next().expect("k >= 1");
    let full = first.last().cloned().unwrap_or_default();
    let mut counts: Vec<(BTreeSet<String>, usize)> = first.into_iter().map(|c| (c, 1)).collect();
    for clusters in per_tree {
        if clusters.last() != Some(&full) {
            return Err(OracleError::LeafSetsDiffer);
        }
        for c in clusters {
            match counts.iter_mut().find(|(d, _)| *d == c) {
                Some((_, n)) => *n += 1,
                None => counts.push((c, 1)),
            }
        }
    }
    Ok(counts
        .into_iter()
        .filter(|&(_, n)| match mode {
            ConsensusMode::Strict => n == k,
            ConsensusMode::Majority => 2 * n > k,
        })
        .map(|(c, _)| c)
        .collect())
}

/// Strict or majority-rule consensus assembled top-down by cardinality
/// from [`naive_consensus_clusters`].
pub fn naive_consensus(
    collection: &TreeCollection,
    mode: ConsensusMode,
) -> Result<PhyloTree, OracleError> {
    let clusters = naive_consensus_clusters(collection, mode)?;
    Ok(tree_from_clusters(&clusters))
}

/// Tree whose cluster set is the given laminar family. The family must
/// contain the full set and every singleton.
pub fn tree_from_clusters(clusters: &BTreeSet<BTreeSet<String>>) -> PhyloTree {
    let mut order: Vec<&BTreeSet<String>> = clusters.iter().collect();
    order.sort_by_key(|c| std::cmp::Reverse(c.len()));
    if order.len() == 1 {
        let name = order[0].iter().next().expect("non-empty cluster");
        return PhyloTree::single_leaf(name.clone());
    }
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); order.len()];
    let mut labels: Vec<Option<String>> = Vec::with_capacity(order.len());
    for (i, c) in order.iter().enumerate() {
        labels.push(if c.len() == 1 {
            c.iter().next().cloned()
        } else {
            None
        });
        if i > 0 {
            let p = (0..i)
                .rev()
                .find(|&j| order[j].len() > c.len() && c.is_subset(order[j]))
                .expect("laminar family with a full set");
            children[p].push(i);
        }
    }
    PhyloTree::from_parts(0, children, labels).expect("laminar family yields a tree")
}

/// Taxon names used by [`random_collection`]: `a`..`z` when they suffice,
/// otherwise `t00`, `t01`, ... padded so that name order is index order.
pub fn taxon_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        let width = (n - 1).to_string().len();
        (0..n).map(|i| format!("t{i:0width$}")).collect()
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Leaf(usize),
    Internal(Vec<Shape>),
}

impl Shape {
    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            Shape::Leaf(i) => out.push(*i),
            Shape::Internal(cs) => cs.iter().for_each(|c| c.leaves(out)),
        }
    }

    fn internal_count(&self) -> usize {
        match self {
            Shape::Leaf(_) => 0,
            Shape::Internal(cs) => 1 + cs.iter().map(Shape::internal_count).sum::<usize>(),
        }
    }

    /// Replaces the `target`-th internal vertex (pre-order) by `f` of it.
    fn replace(self, target: &mut usize, f: &mut dyn FnMut(Shape) -> Shape) -> Shape {
        match self {
            Shape::Leaf(_) => self,
            Shape::Internal(cs) => {
                if *target == 0 {
                    *target = usize::MAX;
                    return f(Shape::Internal(cs));
                }
                *target -= 1;
                Shape::Internal(cs.into_iter().map(|c| c.replace(target, f)).collect())
            }
        }
    }

    fn restrict(self, keep: &[bool]) -> Option<Shape> {
        match self {
            Shape::Leaf(i) => keep[i].then_some(Shape::Leaf(i)),
            Shape::Internal(cs) => {
                let mut kept: Vec<Shape> =
                    cs.into_iter().filter_map(|c| c.restrict(keep)).collect();
                match kept.len() {
                    0 => None,
                    1 => kept.pop(),
                    _ => Some(Shape::Internal(kept)),
                }
            }
        }
    }

    /// Merges some internal vertices into their parents.
    fn contract(self, rng: &mut ChaCha8Rng, p: f64) -> Shape {
        match self {
            Shape::Leaf(_) => self,
            Shape::Internal(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    match c.contract(rng, p) {
                        Shape::Internal(grand) if rng.random_bool(p) => out.extend(grand),
                        other => out.push(other),
                    }
                }
                Shape::Internal(out)
            }
        }
    }
}

fn random_shape(rng: &mut ChaCha8Rng, leaves: &[usize], resolved: bool) -> Shape {
    let mut pool: Vec<Shape> = leaves.iter().map(|&i| Shape::Leaf(i)).collect();
    pool.shuffle(rng);
    while pool.len() > 1 {
        let take = if resolved || pool.len() == 2 {
            2
        } else {
            rng.random_range(2..=pool.len().min(4))
        };
        let mut merged = Vec::with_capacity(take);
        for _ in 0..take {
            let i = rng.random_range(0..pool.len());
            merged.push(pool.swap_remove(i));
        }
        pool.push(Shape::Internal(merged));
    }
    pool.pop().expect("at least one leaf")
}

fn shape_to_tree(shape: &Shape, names: &[String]) -> PhyloTree {
    let mut children: Vec<Vec<VertexId>> = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut stack: Vec<(&Shape, Option<VertexId>)> = vec![(shape, None)];
    while let Some((s, parent)) = stack.pop() {
        let v = children.len();
        children.push(Vec::new());
        if let Some(p) = parent {
            children[p].push(v);
        }
        match s {
            Shape::Leaf(i) => labels.push(Some(names[*i].clone())),
            Shape::Internal(cs) => {
                labels.push(None);
                stack.extend(cs.iter().rev().map(|c| (c, Some(v))));
            }
        }
    }
    PhyloTree::from_parts(0, children, labels).expect("generated shapes are phylogenetic trees")
}

/// Parameters for [`random_collection`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    /// Total number of taxa, at least 2.
    pub n: usize,
    /// Number of trees, at least 1.
    pub k: usize,
    /// Every tree binary.
    pub resolved: bool,
    /// Trees see random subsets (of at least two taxa) of the leaf set.
    pub partial: bool,
}

/// Deterministic random collection. All trees are perturbations of one
/// random base tree, so they share clusters often enough for consensus and
/// compatibility tests to see both outcomes: each tree re-draws a few
/// random subtrees, and unresolved collections also contract random edges.
pub fn random_collection(spec: RandomSpec) -> TreeCollection {
    assert!(spec.n >= 2 && spec.k >= 1, "need n >= 2 and k >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names = taxon_names(spec.n);
    let all: Vec<usize> = (0..spec.n).collect();
    let base = random_shape(&mut rng, &all, spec.resolved);
    let mut trees = Vec::with_capacity(spec.k);
    for _ in 0..spec.k {
        let mut shape = base.clone();
        let redraws = rng.random_range(0..=2);
        for _ in 0..redraws {
            let mut target = rng.random_range(0..shape.internal_count());
            let mut sub_rng = ChaCha8Rng::seed_from_u64(rng.random());
            shape = shape.replace(&mut target, &mut |sub| {
                let mut leaves = Vec::new();
                sub.leaves(&mut leaves);
                random_shape(&mut sub_rng, &leaves, spec.resolved)
            });
        }
        if !spec.resolved {
            let p = *[0.0, 0.2, 0.5].choose(&mut rng).expect("non-empty");
            shape = shape.contract(&mut rng, p);
        }
        if spec.partial {
            let size = rng.random_range(2..=spec.n);
            let mut chosen = all.clone();
            chosen.shuffle(&mut rng);
            let mut keep = vec![false; spec.n];
            chosen[..size].iter().for_each(|&i| keep[i] = true);
            shape = shape.restrict(&keep).expect("at least two leaves kept");
        }
        trees.push(shape_to_tree(&shape, &names));
    }
    TreeCollection::new(trees).expect("k >= 1")
}

/// One random tree on `n` taxa.
pub fn random_tree(seed: u64, n: usize, resolved: bool) -> PhyloTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..n).collect();
    let shape = random_shape(&mut rng, &all, resolved);
    shape_to_tree(&shape, &taxon_names(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use phylotag::{parse_newick, serialize_newick};

    fn collection(text: &str) -> TreeCollection {
        parse_newick(text).unwrap()
    }

    #[test]
    fn topology_counts_small() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| TopologyEnumerator::new(taxon_names(n)).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 26, 236, 2752]);
    }

    #[test]
    fn topologies_are_distinct() {
        let mut seen = BTreeSet::new();
        for t in TopologyEnumerator::new(taxon_names(5)).unwrap() {
            assert!(seen.insert(serialize_newick(&t)));
        }
        assert_eq!(seen.len(), 236);
    }

    #[test]
    fn three_taxa_topologies() {
        let got: BTreeSet<String> = TopologyEnumerator::new(taxon_names(3))
            .unwrap()
            .map(|t| serialize_newick(&t))
            .collect();
        let want: BTreeSet<String> = ["(a,b,c);", "((a,b),c);", "((a,c),b);", "(a,(b,c));"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumerator_bound() {
        assert!(TopologyEnumerator::new(taxon_names(9)).is_err());
    }

    #[test]
    fn brute_compat_examples() {
        let c = collection("((a,b),c);\n((a,b),d);");
        assert!(matches!(
            brute_compat(&c).unwrap(),
            BruteCompat::Compatible(_)
        ));
        let c = collection("((a,b),c);\n((a,c),b);");
        assert_eq!(brute_compat(&c).unwrap(), BruteCompat::NotCompatible);
        let c = collection("((a,b),(c,d));");
        match brute_compat(&c).unwrap() {
            BruteCompat::Compatible(t) => assert_eq!(serialize_newick(&t), "((a,b),(c,d));"),
            BruteCompat::NotCompatible => panic!(),
        }
        let c = collection("(a,b,c,d,e,f,g);");
        assert!(brute_compat(&c).is_err());
    }

    #[test]
    fn naive_consensus_examples() {
        let c = collection("((a,b),(c,d));\n((a,b),c,d);");
        let t = naive_consensus(&c, ConsensusMode::Majority).unwrap();
        assert_eq!(serialize_newick(&t), "((a,b),c,d);");
        let c = collection("((a,b),c,d,e);\n((a,b),(c,d),e);\n((a,b,c),d,e);");
        let t = naive_consensus(&c, ConsensusMode::Majority).unwrap();
        assert_eq!(serialize_newick(&t), "((a,b),c,d,e);");
        let c = collection("(((a,b),c),d);\n(((c,d),b),a);");
        let t = naive_consensus(&c, ConsensusMode::Strict).unwrap();
        assert_eq!(serialize_newick(&t), "(a,b,c,d);");
        let c = collection("((a,b),c);\n((a,b),c);");
        let t = naive_consensus(&c, ConsensusMode::Strict).unwrap();
        assert_eq!(serialize_newick(&t), "((a,b),c);");
        let c = collection("((a,b),c);\n((a,b),d);");
        assert_eq!(
            naive_consensus(&c, ConsensusMode::Strict),
            Err(OracleError::LeafSetsDiffer)
        );
    }

    #[test]
    fn random_collection_is_deterministic() {
        let spec = RandomSpec {
            seed: 1,
            n: 4,
            k: 2,
            resolved: false,
            partial: false,
        };
        let a: Vec<String> = random_collection(spec)
            .trees()
            .map(serialize_newick)
            .collect();
        let b: Vec<String> = random_collection(spec)
            .trees()
            .map(serialize_newick)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn resolved_trees_are_binary() {
        for seed in 0..50 {
            let spec = RandomSpec {
                seed,
                n: 9,
                k: 4,
                resolved: true,
                partial: seed % 2 == 0,
            };
            assert!(random_collection(spec).trees().all(PhyloTree::is_binary));
        }
    }

    #[test]
    fn two_taxa_give_the_only_tree() {
        let spec = RandomSpec {
            seed: 7,
            n: 2,
            k: 3,
            resolved: false,
            partial: true,
        };
        for t in random_collection(spec).trees() {
            assert_eq!(serialize_newick(t), "(a,b);");
        }
    }

    #[test]
    fn common_leaf_set_unless_partial() {
        for seed in 0..30 {
            let spec = RandomSpec {
                seed,
                n: 8,
                k: 5,
                resolved: false,
                partial: false,
            };
            assert!(random_collection(spec).has_common_leaf_set());
        }
    }

    #[test]
    fn long_names_sort_by_index() {
        let names = taxon_names(120);
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(names[7], "t007");
    }
}
