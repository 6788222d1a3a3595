//! Rooted phylogenetic trees, tree collections, and the Newick text format.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Index of a vertex inside one [`PhyloTree`].
pub type VertexId = usize;

/// Stable identifier of a tree inside a [`TreeCollection`].
///
/// Ids survive reordering of the collection, so provenance recorded against
/// them does not depend on the order the trees were supplied in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeId(pub usize);

impl fmt::Display for TreeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no vertices")]
    Empty,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("vertex {0} has more than one parent")]
    MultipleParents(VertexId),
    #[error("vertex {0} is not reachable from the root")]
    Unreachable(VertexId),
    #[error("the root has a parent")]
    RootHasParent,
    #[error("internal vertex {0} has fewer than two children")]
    UnaryVertex(VertexId),
    #[error("leaf vertex {0} has no label")]
    UnlabeledLeaf(VertexId),
    #[error("internal vertex {0} carries a label")]
    LabeledInternal(VertexId),
    #[error("duplicate leaf label `{0}`")]
    DuplicateLabel(String),
    #[error("a tree collection needs at least one tree")]
    EmptyCollection,
    #[error("tree order is not a permutation of the collection's tree ids")]
    NotAPermutation,
}

/// A rooted tree whose leaves carry distinct taxon names.
///
/// Every internal vertex has at least two children. The only tree with a
/// childless root is the single-vertex tree, whose root is a labeled leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    labels: Vec<Option<String>>,
}

impl PhyloTree {
    /// Builds a tree from per-vertex child lists and leaf labels, checking
    /// every structural invariant.
    pub fn from_parts(
        root: VertexId,
        children: Vec<Vec<VertexId>>,
        labels: Vec<Option<String>>,
    ) -> Result<Self, TreeError> {
        let len = children.len();
        if len == 0 {
            return Err(TreeError::Empty);
        }
        if root >= len || labels.len() != len {
            return Err(TreeError::VertexOutOfRange(root.max(labels.len())));
        }

        let mut parent = vec![None; len];
        for (v, kids) in children.iter().enumerate() {
            for &c in kids {
                if c >= len {
                    return Err(TreeError::VertexOutOfRange(c));
                }
                if c == root {
                    return Err(TreeError::RootHasParent);
                }
                if parent[c].is_some() {
                    return Err(TreeError::MultipleParents(c));
                }
                parent[c] = Some(v);
            }
        }

        // Reachability from the root rules out cycles among the remaining
        // vertices, since each has exactly one parent.
        let mut seen = vec![false; len];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            seen[v] = true;
            stack.extend(children[v].iter().copied());
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(TreeError::Unreachable(v));
        }

        let mut names = BTreeSet::new();
        for v in 0..len {
            let is_leaf = children[v].is_empty();
            match (&labels[v], is_leaf) {
                (None, true) => return Err(TreeError::UnlabeledLeaf(v)),
                (Some(_), false) => return Err(TreeError::LabeledInternal(v)),
                (Some(name), true) => {
                    if name.is_empty() {
                        return Err(TreeError::UnlabeledLeaf(v));
                    }
                    if !names.insert(name.as_str()) {
                        return Err(TreeError::DuplicateLabel(name.clone()));
                    }
                }
                (None, false) => {
                    if children[v].len() < 2 {
                        return Err(TreeError::UnaryVertex(v));
                    }
                }
            }
        }

        Ok(PhyloTree {
            root,
            parent,
            children,
            labels,
        })
    }

    /// The single-vertex tree whose root is the leaf `name`.
    pub fn single_leaf(name: impl Into<String>) -> Self {
        PhyloTree {
            root: 0,
            parent: vec![None],
            children: vec![Vec::new()],
            labels: vec![Some(name.into())],
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.len() - 1
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).filter(move |&v| self.is_leaf(v))
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).filter(move |&v| !self.is_leaf(v))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Leaf names in lexicographic order.
    pub fn taxa(&self) -> BTreeSet<&str> {
        self.leaves().filter_map(|v| self.label(v)).collect()
    }

    pub fn is_binary(&self) -> bool {
        self.internal_vertices()
            .all(|v| self.children[v].len() == 2)
    }

    /// Vertices in post-order: every vertex appears after all its children.
    pub fn postorder(&self) -> Vec<VertexId> {
        let mut order = Vec::with_capacity(self.vertex_count());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }
}

/// An ordered list of trees, each carrying a stable [`TreeId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCollection {
    trees: Vec<(TreeId, PhyloTree)>,
}

impl TreeCollection {
    /// Assigns ids `0..k` in the given order.
    pub fn new(trees: Vec<PhyloTree>) -> Result<Self, TreeError> {
        if trees.is_empty() {
            return Err(TreeError::EmptyCollection);
        }
        Ok(TreeCollection {
            trees: trees
                .into_iter()
                .enumerate()
                .map(|(i, t)| (TreeId(i), t))
                .collect(),
        })
    }

    /// Returns the same trees listed in `order`, keeping their ids.
    pub fn reordered(&self, order: &[TreeId]) -> Result<Self, TreeError> {
        let k = self.len();
        if order.len() != k {
            return Err(TreeError::NotAPermutation);
        }
        let mut seen = vec![false; k];
        let mut trees = Vec::with_capacity(k);
        for &id in order {
            if id.0 >= k || seen[id.0] {
                return Err(TreeError::NotAPermutation);
            }
            seen[id.0] = true;
            trees.push((id, self.get(id).clone()));
        }
        Ok(TreeCollection { trees })
    }

    /// Number of trees, `k`.
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TreeId, &PhyloTree)> + '_ {
        self.trees.iter().map(|(id, t)| (*id, t))
    }

    pub fn trees(&self) -> impl Iterator<Item = &PhyloTree> + '_ {
        self.trees.iter().map(|(_, t)| t)
    }

    /// Tree ids in listing order.
    pub fn ids(&self) -> Vec<TreeId> {
        self.trees.iter().map(|(id, _)| *id).collect()
    }

    /// Looks a tree up by id.
    ///
    /// Panics if `id` does not belong to this collection.
    pub fn get(&self, id: TreeId) -> &PhyloTree {
        // ids are dense, so the lookup is direct in the common unpermuted case
        match self.trees.get(id.0) {
            Some((found, t)) if *found == id => t,
            _ => {
                &self
                    .trees
                    .iter()
                    .find(|(found, _)| *found == id)
                    .expect("tree id belongs to the collection")
                    .1
            }
        }
    }

    /// All taxon names appearing in any tree, in lexicographic order.
    pub fn taxa(&self) -> BTreeSet<&str> {
        self.trees().flat_map(|t| t.taxa()).collect()
    }

    /// True when every tree has the same leaf set.
    pub fn has_common_leaf_set(&self) -> bool {
        let mut sets = self.trees().map(|t| t.taxa());
        let first = sets.next().expect("collection is non-empty");
        sets.all(|s| s == first)
    }
}

/// Every cluster of `tree`, one per vertex, trivial clusters included.
pub fn clusters_of(tree: &PhyloTree) -> BTreeSet<BTreeSet<String>> {
    let mut below: Vec<BTreeSet<String>> = vec![BTreeSet::new(); tree.vertex_count()];
    for v in tree.postorder() {
        let mut cluster = BTreeSet::new();
        if let Some(name) = tree.label(v) {
            cluster.insert(name.to_string());
        }
        for &c in tree.children(v) {
            cluster.extend(below[c].iter().cloned());
        }
        below[v] = cluster;
    }
    below.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickErrorKind {
    #[error("no trees in input")]
    EmptyInput,
    #[error("{0}")]
    Syntax(&'static str),
    #[error("duplicate leaf name `{0}`")]
    DuplicateLeaf(String),
    #[error("internal vertex with a single child")]
    UnaryVertex,
}

/// A Newick parse failure, located by 1-based line and column and by the
/// 0-based index of the tree being read.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column} (tree {tree_index}): {kind}")]
pub struct NewickError {
    pub line: usize,
    pub column: usize,
    pub tree_index: usize,
    pub kind: NewickErrorKind,
}

/// Parses Newick text into a collection, one tree per `;`-terminated
/// expression. Internal labels and branch lengths are read and dropped,
/// bracketed comments are skipped.
pub fn parse_newick(text: &str) -> Result<TreeCollection, NewickError> {
    let trees = parse_newick_trees(text)?;
    if trees.is_empty() {
        return Err(NewickError {
            line: 1,
            column: 1,
            tree_index: 0,
            kind: NewickErrorKind::EmptyInput,
        });
    }
    Ok(TreeCollection::new(trees).expect("non-empty"))
}

/// Like [`parse_newick`] but accepts input with no trees.
pub fn parse_newick_trees(text: &str) -> Result<Vec<PhyloTree>, NewickError> {
    let mut parser = Parser::new(text);
    let mut trees = Vec::new();
    loop {
        parser.skip_blank()?;
        if parser.peek().is_none() {
            return Ok(trees);
        }
        let tree = parser.tree(trees.len())?;
        trees.push(tree);
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

fn is_length_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Parser<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn error_at(&self, pos: Pos, tree_index: usize, kind: NewickErrorKind) -> NewickError {
        NewickError {
            line: pos.line,
            column: pos.column,
            tree_index,
            kind,
        }
    }

    /// Skips whitespace and `[...]` comments.
    fn skip_blank(&mut self) -> Result<(), NewickError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '[' {
                let start = self.pos;
                self.bump();
                loop {
                    match self.bump() {
                        Some(']') => break,
                        Some(_) => {}
                        None => {
                            return Err(self.error_at(
                                start,
                                0,
                                NewickErrorKind::Syntax("unterminated comment"),
                            ))
                        }
                    }
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn name(&mut self) -> String {
        let mut name = String::new();
        while let Some(c) = self.peek().filter(|&c| is_name_char(c)) {
            name.push(c);
            self.bump();
        }
        name
    }

    /// Optional `:length` suffix; the value is discarded.
    fn branch_length(&mut self, tree_index: usize) -> Result<(), NewickError> {
        self.skip_blank()
            .map_err(|e| NewickError { tree_index, ..e })?;
        if self.peek() != Some(':') {
            return Ok(());
        }
        self.bump();
        self.skip_blank()
            .map_err(|e| NewickError { tree_index, ..e })?;
        let start = self.pos;
        let mut digits = 0;
        while self.peek().is_some_and(is_length_char) {
            self.bump();
            digits += 1;
        }
        if digits == 0 {
            return Err(self.error_at(
                start,
                tree_index,
                NewickErrorKind::Syntax("expected a branch length after `:`"),
            ));
        }
        Ok(())
    }

    fn tree(&mut self, tree_index: usize) -> Result<PhyloTree, NewickError> {
        let skip = |p: &mut Self| p.skip_blank().map_err(|e| NewickError { tree_index, ..e });

        let mut children: Vec<Vec<VertexId>> = Vec::new();
        let mut labels: Vec<Option<String>> = Vec::new();
        let mut opened_at: Vec<Pos> = Vec::new();
        let mut open: Vec<VertexId> = Vec::new();
        let mut root = None;

        'subtree: loop {
            // Expecting the start of a subtree.
            skip(self)?;
            let start = self.pos;
            let v = children.len();
            children.push(Vec::new());
            opened_at.push(start);
            match open.last() {
                Some(&p) => children[p].push(v),
                None => root = Some(v),
            }
            match self.peek() {
                Some('(') => {
                    self.bump();
                    labels.push(None);
                    open.push(v);
                    continue 'subtree;
                }
                Some(c) if is_name_char(c) => {
                    labels.push(Some(self.name()));
                }
                Some(',') | Some(')') | Some(';') => {
                    return Err(self.error_at(
                        start,
                        tree_index,
                        NewickErrorKind::Syntax("empty leaf name"),
                    ))
                }
                Some(_) => {
                    return Err(self.error_at(
                        start,
                        tree_index,
                        NewickErrorKind::Syntax("unexpected character"),
                    ))
                }
                None => {
                    return Err(self.error_at(
                        start,
                        tree_index,
                        NewickErrorKind::Syntax("unexpected end of input"),
                    ))
                }
            }

            // After a complete subtree.
            loop {
                self.branch_length(tree_index)?;
                skip(self)?;
                let here = self.pos;
                match self.peek() {
                    Some(',') if !open.is_empty() => {
                        self.bump();
                        continue 'subtree;
                    }
                    Some(')') if !open.is_empty() => {
                        self.bump();
                        open.pop();
                        skip(self)?;
                        // internal label, discarded
                        self.name();
                    }
                    Some(';') if open.is_empty() => {
                        self.bump();
                        break 'subtree;
                    }
                    Some(',') | Some(')') => {
                        return Err(self.error_at(
                            here,
                            tree_index,
                            NewickErrorKind::Syntax("unbalanced parentheses"),
                        ))
                    }
                    Some(';') => {
                        return Err(self.error_at(
                            here,
                            tree_index,
                            NewickErrorKind::Syntax("`;` inside an open subtree"),
                        ))
                    }
                    Some(_) => {
                        return Err(self.error_at(
                            here,
                            tree_index,
                            NewickErrorKind::Syntax("unexpected character"),
                        ))
                    }
                    None => {
                        return Err(self.error_at(
                            here,
                            tree_index,
                            NewickErrorKind::Syntax("missing `;`"),
                        ))
                    }
                }
            }
        }

        let mut names: BTreeMap<&str, ()> = BTreeMap::new();
        for v in 0..children.len() {
            match &labels[v] {
                Some(name) => {
                    if names.insert(name.as_str(), ()).is_some() {
                        return Err(self.error_at(
                            opened_at[v],
                            tree_index,
                            NewickErrorKind::DuplicateLeaf(name.clone()),
                        ));
                    }
                }
                None => {
                    if children[v].len() < 2 {
                        return Err(self.error_at(
                            opened_at[v],
                            tree_index,
                            NewickErrorKind::UnaryVertex,
                        ));
                    }
                }
            }
        }

        let root = root.expect("a subtree was opened");
        Ok(PhyloTree::from_parts(root, children, labels).expect("parser output is a valid tree"))
    }
}

/// Canonical Newick for `tree`: children ordered by the smallest taxon name
/// below them, no branch lengths, no internal labels.
pub fn serialize_newick(tree: &PhyloTree) -> String {
    let mut smallest: Vec<&str> = vec![""; tree.vertex_count()];
    for v in tree.postorder() {
        smallest[v] = match tree.label(v) {
            Some(name) => name,
            None => tree
                .children(v)
                .iter()
                .map(|&c| smallest[c])
                .min()
                .expect("internal vertex has children"),
        };
    }

    let sorted_children = |v: VertexId| {
        let mut kids = tree.children(v).to_vec();
        kids.sort_by_key(|&c| smallest[c]);
        kids
    };

    let mut out = String::new();
    // (vertex, remaining children in reverse order)
    let mut stack: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
    let emit =
        |v: VertexId, out: &mut String, stack: &mut Vec<(VertexId, Vec<VertexId>)>| match tree
            .label(v)
        {
            Some(name) => out.push_str(name),
            None => {
                out.push('(');
                let mut kids = sorted_children(v);
                kids.reverse();
                stack.push((v, kids));
            }
        };
    emit(tree.root(), &mut out, &mut stack);
    while let Some((v, mut kids)) = stack.pop() {
        match kids.pop() {
            Some(c) => {
                let first = kids.len() + 1 == tree.children(v).len();
                if !first {
                    out.push(',');
                }
                stack.push((v, kids));
                emit(c, &mut out, &mut stack);
            }
            None => out.push(')'),
        }
    }
    out.push(';');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn one(text: &str) -> PhyloTree {
        let c = parse_newick(text).unwrap();
        assert_eq!(c.len(), 1);
        c.get(TreeId(0)).clone()
    }

    #[test]
    fn parses_simple_tree() {
        let t = one("((a,b),c);");
        let expected: BTreeSet<_> = [
            set(&["a"]),
            set(&["b"]),
            set(&["c"]),
            set(&["a", "b"]),
            set(&["a", "b", "c"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(clusters_of(&t), expected);
    }

    #[test]
    fn parses_three_tree_collection() {
        let c = parse_newick("((a,b,c),d);\n((a,b,d),c);\n((a,b),e);").unwrap();
        assert_eq!(c.len(), 3);
        let t1 = clusters_of(c.get(TreeId(0)));
        assert!(t1.contains(&set(&["a", "b", "c"])));
        let t2 = clusters_of(c.get(TreeId(1)));
        assert!(t2.contains(&set(&["a", "b", "d"])));
        let t3 = clusters_of(c.get(TreeId(2)));
        assert!(t3.contains(&set(&["a", "b"])));
        assert_eq!(c.taxa().len(), 5);
    }

    #[test]
    fn rejects_unary_vertex() {
        let err = parse_newick("((a),b);").unwrap_err();
        assert_eq!(err.kind, NewickErrorKind::UnaryVertex);
        assert_eq!((err.line, err.column), (1, 2));
        assert_eq!(
            parse_newick("(a);").unwrap_err().kind,
            NewickErrorKind::UnaryVertex
        );
    }

    #[test]
    fn rejects_duplicate_leaf() {
        let err = parse_newick("((a,b),a);").unwrap_err();
        assert_eq!(err.kind, NewickErrorKind::DuplicateLeaf("a".into()));
    }

    #[test]
    fn rejects_empty_input() {
        assert_eq!(
            parse_newick("").unwrap_err().kind,
            NewickErrorKind::EmptyInput
        );
        assert_eq!(
            parse_newick("  \n [just a comment]\n").unwrap_err().kind,
            NewickErrorKind::EmptyInput
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_newick("((a,b),c);\n((a,b),c\n").unwrap_err();
        assert!(matches!(err.kind, NewickErrorKind::Syntax(_)));
        assert_eq!(err.tree_index, 1);
        assert_eq!(err.line, 3);

        let err = parse_newick("((a,,b),c);").unwrap_err();
        assert_eq!(err.kind, NewickErrorKind::Syntax("empty leaf name"));
        assert_eq!((err.line, err.column), (1, 5));

        assert!(parse_newick("(a,b));").is_err());
        assert!(parse_newick("((a,b),c;").is_err());
        assert!(parse_newick("(a,b),c;").is_err());
        assert!(parse_newick("(a,'b');").is_err());
        assert!(parse_newick("(a:,b);").is_err());
    }

    #[test]
    fn discards_lengths_labels_and_comments() {
        let t = one("((a:0.1,b:2e-3)ab:1.5,[note] c:3)root;");
        assert_eq!(serialize_newick(&t), "((a,b),c);");
    }

    #[test]
    fn serializes_single_leaf() {
        assert_eq!(serialize_newick(&PhyloTree::single_leaf("a")), "a;");
        assert_eq!(serialize_newick(&one("a;")), "a;");
    }

    #[test]
    fn serialization_is_canonical() {
        let t = one("(c,(b,a));");
        assert_eq!(serialize_newick(&t), "((a,b),c);");
        let again = one(&serialize_newick(&t));
        assert_eq!(serialize_newick(&again), serialize_newick(&t));
        assert_eq!(clusters_of(&again), clusters_of(&t));
    }

    #[test]
    fn clusters_of_three_trees() {
        let t1 = one("((a,b,c),d);");
        let expected: BTreeSet<_> = [
            set(&["a"]),
            set(&["b"]),
            set(&["c"]),
            set(&["d"]),
            set(&["a", "b", "c"]),
            set(&["a", "b", "c", "d"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(clusters_of(&t1), expected);

        let t3 = one("((a,b),e);");
        assert_eq!(clusters_of(&t3).len(), 5);
        assert_eq!(
            clusters_of(&PhyloTree::single_leaf("a")),
            [set(&["a"])].into_iter().collect()
        );
    }

    #[test]
    fn from_parts_checks_invariants() {
        let leaf = |s: &str| Some(s.to_string());
        assert_eq!(
            PhyloTree::from_parts(0, vec![vec![1], vec![]], vec![None, leaf("a")]),
            Err(TreeError::UnaryVertex(0))
        );
        assert_eq!(
            PhyloTree::from_parts(
                0,
                vec![vec![1, 2], vec![], vec![]],
                vec![None, leaf("a"), leaf("a")]
            ),
            Err(TreeError::DuplicateLabel("a".into()))
        );
        assert_eq!(
            PhyloTree::from_parts(
                0,
                vec![vec![1, 2], vec![], vec![], vec![]],
                vec![None, leaf("a"), leaf("b"), leaf("c")]
            ),
            Err(TreeError::Unreachable(3))
        );
        assert!(PhyloTree::from_parts(
            2,
            vec![vec![], vec![], vec![0, 1]],
            vec![leaf("x"), leaf("y"), None]
        )
        .is_ok());
    }

    #[test]
    fn reordering_keeps_ids() {
        let c = parse_newick("(a,b);\n((a,b),c);\n(b,c);").unwrap();
        let r = c.reordered(&[TreeId(2), TreeId(0), TreeId(1)]).unwrap();
        assert_eq!(r.ids(), vec![TreeId(2), TreeId(0), TreeId(1)]);
        assert_eq!(r.get(TreeId(1)), c.get(TreeId(1)));
        assert_eq!(
            c.reordered(&[TreeId(0), TreeId(0), TreeId(1)]),
            Err(TreeError::NotAPermutation)
        );
    }

    #[test]
    fn postorder_visits_children_first() {
        let t = one("((a,b),(c,(d,e)));");
        let order = t.postorder();
        assert_eq!(order.len(), t.vertex_count());
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for v in 0..t.vertex_count() {
            for &c in t.children(v) {
                assert!(pos[c] < pos[v]);
            }
        }
    }
}
