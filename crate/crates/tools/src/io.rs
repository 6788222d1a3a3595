//! Reading tree files.

use std::io::Read;
use std::path::{Path, PathBuf};

use phylotag::model::parse_newick_trees;
use phylotag::{NewickError, PhyloTree, TreeCollection};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// `tree` counts across all files read so far, `error.tree_index`
    /// within the file.
    #[error("{}: line {}, column {} (tree {tree}): {}", .path.display(), .error.line, .error.column, .error.kind)]
    Newick {
        path: PathBuf,
        tree: usize,
        error: NewickError,
    },
    #[error("no trees in input")]
    Empty,
}

/// Reads Newick trees from each path in turn, `-` meaning standard input,
/// and concatenates them in argument order.
pub fn read_collection<P: AsRef<Path>>(paths: &[P]) -> Result<TreeCollection, InputError> {
    let mut trees: Vec<PhyloTree> = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let text = read_text(path)?;
        let parsed = parse_newick_trees(&text).map_err(|error| InputError::Newick {
            path: path.to_path_buf(),
            tree: trees.len() + error.tree_index,
            error,
        })?;
        trees.extend(parsed);
    }
    TreeCollection::new(trees).map_err(|_| InputError::Empty)
}

fn read_text(path: &Path) -> Result<String, InputError> {
    let io = |source| InputError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// Parses Newick text held in memory, labelled `name` in errors.
pub fn parse_named(name: &str, text: &str) -> Result<TreeCollection, InputError> {
    let trees = parse_newick_trees(text).map_err(|error| InputError::Newick {
        path: PathBuf::from(name),
        tree: error.tree_index,
        error,
    })?;
    TreeCollection::new(trees).map_err(|_| InputError::Empty)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_names_file_line_and_tree() {
        let err = parse_named("x.nwk", "((a,b),c);\n((a,b),c,;\n").unwrap_err();
        let text = err.to_string();
        assert!(text.starts_with("x.nwk: line 2"), "{text}");
        assert!(text.contains("(tree 1)"), "{text}");
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse_named("e", "\n\n"), Err(InputError::Empty)));
    }
}
