use std::path::{Path, PathBuf};
use std::process::Command;

use phylotag_tools::cli::{run, EXIT_NOT_COMPATIBLE, EXIT_OK, EXIT_USAGE};
use phylotag_tools::TagDump;
use tempfile::TempDir;

const THREE_TREES: &str = "((a,b,c),d);\n((a,b,d),c);\n((a,b),e);\n";
const COMMON: &str = "((a,b),(c,d));\n((a,b),c,d);\n(((a,b),c),d);\n";
const CONFLICT: &str = "((a,b),c);\n((a,c),b);\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["phylotag"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_dot_for_three_trees() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "trees.nwk", THREE_TREES);
    let (code, out, _) = call(&["build", "--format", "dot", p(&f)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("digraph"));
    let nodes = out.lines().filter(|l| l.contains("[label=")).count();
    assert_eq!(nodes, 10);
    assert_eq!(out.matches(" -> ").count(), 14);
}

#[test]
fn build_json_to_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "trees.nwk", THREE_TREES);
    let target = dir.path().join("tag.json");
    let (code, out, _) = call(&["build", "--format", "json", "-o", p(&target), p(&f)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let dump: TagDump = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(dump.taxa, 5);
    assert_eq!(dump.trees, 3);
    assert_eq!(dump.nodes.len(), 10);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "trees.nwk", THREE_TREES);
    for args in [
        vec!["build", "--format", "json", p(&f)],
        vec!["build", p(&f)],
        vec!["smith", "--all-orders", "--format", "json", p(&f)],
    ] {
        assert_eq!(call(&args), call(&args));
    }
}

#[test]
fn consensus_modes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "common.nwk", COMMON);
    assert_eq!(
        call(&["consensus", "--majority", p(&f)]).1,
        "((a,b),c,d);\n"
    );
    assert_eq!(call(&["consensus", "--strict", p(&f)]).1, "((a,b),c,d);\n");
    assert_eq!(
        call(&["consensus", "--threshold", "3", p(&f)]).1,
        "((a,b),c,d);\n"
    );
    let (code, _, err) = call(&["consensus", "--threshold", "1", p(&f)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("threshold"), "{err}");
}

#[test]
fn consensus_needs_one_mode_and_common_leaves() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "trees.nwk", THREE_TREES);
    assert_eq!(call(&["consensus", p(&f)]).0, EXIT_USAGE);
    assert_eq!(
        call(&["consensus", "--strict", "--majority", p(&f)]).0,
        EXIT_USAGE
    );
    let (code, _, err) = call(&["consensus", "--majority", p(&f)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("leaf set"), "{err}");
}

#[test]
fn compat_outcomes() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "pair.nwk", "((a,b),c);\n((a,b),d);\n");
    let bad = write(&dir, "bad.nwk", CONFLICT);
    assert_eq!(
        call(&["compat", p(&ok)]),
        (EXIT_OK, "((a,b),c,d);\n".to_string(), String::new())
    );
    let (code, out, _) = call(&["compat", p(&bad)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("NOT COMPATIBLE\n"));
    assert!(out.contains("{a,b}") && out.contains("{a,c}"), "{out}");
    assert_eq!(
        call(&["compat", "--status-compat", p(&bad)]).0,
        EXIT_NOT_COMPATIBLE
    );
    assert_eq!(call(&["compat", "--status-compat", p(&ok)]).0, EXIT_OK);
}

#[test]
fn files_concatenate_in_order() {
    let dir = TempDir::new().unwrap();
    let first = write(&dir, "one.nwk", "((a,b),c);\n");
    let second = write(&dir, "two.nwk", "((a,c),b);\n");
    let (_, out, _) = call(&["smith", "--all-orders", p(&first), p(&second)]);
    assert!(out.contains("orders tried: 2"), "{out}");
    let (_, out, _) = call(&["compat", p(&first), p(&second)]);
    assert!(out.starts_with("NOT COMPATIBLE"));
}

#[test]
fn smith_report_shows_order_dependence() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "trees.nwk", THREE_TREES);
    let (code, out, _) = call(&["smith", "--all-orders", p(&f)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("distinct node sets: 2"), "{out}");
    let (_, out, _) = call(&[
        "smith",
        "--all-orders",
        "--post-process",
        "--format",
        "json",
        p(&f),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["post_processed"], true);
    assert!(v["distinct_node_sets"].as_u64().unwrap() >= 2);
}

#[test]
fn smith_sampling_is_seeded() {
    let dir = TempDir::new().unwrap();
    let text: String = (0..6).map(|_| "((a,b),(c,d));\n").collect();
    let f = write(&dir, "six.nwk", &text);
    let a = call(&["smith", "--sample", "5", "--seed", "3", p(&f)]);
    assert!(a.1.contains("orders tried: 5"), "{}", a.1);
    assert_eq!(a, call(&["smith", "--sample", "5", "--seed", "3", p(&f)]));
    assert!(a.1.contains("distinct node sets: 1"));
}

#[test]
fn input_errors_name_file_line_and_tree() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.nwk", "((a,b),c);\n");
    let bad = write(&dir, "bad.nwk", "((a,b),c);\n((a),b);\n");
    let (code, _, err) = call(&["build", p(&good), p(&bad)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bad.nwk"), "{err}");
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("(tree 2)"), "{err}");

    let missing = dir.path().join("missing.nwk");
    let (code, _, err) = call(&["build", p(&missing)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("missing.nwk"), "{err}");

    let empty = write(&dir, "empty.nwk", "\n");
    assert_eq!(call(&["build", p(&empty)]).0, EXIT_USAGE);
}

#[test]
fn oracle_is_hidden_but_usable() {
    let (_, help, _) = call(&["--help"]);
    assert!(help.contains("consensus") && !help.contains("oracle"));
    assert_eq!(call(&["oracle", "topologies", "--taxa", "4"]).1, "26\n");
    let (code, out, _) = call(&["oracle", "random", "--seed", "1", "--n", "4", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
    assert_eq!(
        out,
        call(&["oracle", "random", "--seed", "1", "--n", "4", "--k", "2"]).1
    );

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "common.nwk", COMMON);
    assert_eq!(
        call(&["oracle", "consensus", "--majority", p(&f)]).1,
        "((a,b),c,d);\n"
    );
    let bad = write(&dir, "bad.nwk", CONFLICT);
    assert_eq!(call(&["oracle", "compat", p(&bad)]).1, "NOT COMPATIBLE\n");
}

#[test]
fn binary_exit_statuses() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.nwk", CONFLICT);
    let bin = env!("CARGO_BIN_EXE_phylotag");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["compat", p(&bad)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("NOT COMPATIBLE"));
    assert_eq!(
        status(&["compat", "--status-compat", p(&bad)])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(status(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(status(&["--version"]).status.code(), Some(0));
}
