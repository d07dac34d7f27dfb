use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn mospace(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_mospace"))
        .args(args)
        .current_dir(data(""))
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Result lines: everything but comments and the final count line.
fn results(r: &Run) -> Vec<&str> {
    let lines: Vec<&str> = r.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    lines[..lines.len() - 1].to_vec()
}

fn count_line(r: &Run) -> &str {
    r.stdout.lines().last().unwrap()
}

#[test]
fn contexts_of_a_three_atom_block() {
    let r = mospace(&["contexts", "--input", "c3.blk"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(results(&r).len(), 5);
    assert_eq!(count_line(&r), "5 contexts");
}

#[test]
fn outcomes_of_a_two_atom_block() {
    let r = mospace(&["mo", "--input", "c2.blk"]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r), vec!["e1|e2@{e1}", "e1|e2@{e2}"]);
    assert_eq!(count_line(&r), "2 outcomes");
}

#[test]
fn triangle_has_no_colorings() {
    let r = mospace(&["colorings", "--input", "triangle.blk"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.ends_with("0 colorings\n"));
    assert!(r.stdout.contains("# colorable no"));
}

#[test]
fn eighteen_vectors_have_no_colorings() {
    let r = mospace(&["colorings", "--input", "ks18.blk"]);
    assert_eq!(r.code, 0);
    assert_eq!(count_line(&r), "0 colorings");
}

#[test]
fn counts_on_fixtures() {
    let cases = [
        (&["pmo", "--input", "c2.blk"][..], "3 points"),
        (&["pmo", "--input", "c3.blk"], "10 points"),
        (&["pmo", "--input", "spin.blk"], "7 points"),
        (&["mo", "--input", "c3.blk"], "3 outcomes"),
        (&["mo", "--input", "spin.blk"], "6 outcomes"),
        (&["sections", "--input", "spin.blk"], "8 sections"),
        (&["sections", "--input", "c3.blk"], "3 sections"),
        (&["colorings", "--input", "spin.blk"], "8 colorings"),
        (
            &["frame", "--input", "spin.blk", "--site", "dense"],
            "8 opens",
        ),
        (
            &["booleanize", "--input", "spin.blk", "--site", "dense"],
            "8 opens",
        ),
        (
            &["frame", "--input", "c2.blk", "--site", "gelfand:e1|e2"],
            "4 opens",
        ),
        (&["frame", "--input", "c2.blk", "--site", "mo"], "4 opens"),
        (&["validate", "--input", "dup_block.blk"], "valid"),
    ];
    for (args, expected) in cases {
        let r = mospace(args);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        assert_eq!(count_line(&r), expected, "{args:?}");
    }
}

#[test]
fn dot_diagrams() {
    let r = mospace(&["dot", "--input", "spin.blk", "--what", "contexts"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("# 4 nodes, 3 edges"));
    assert!(r.stdout.contains("digraph \"contexts\" {"));
    assert_eq!(r.stdout.lines().filter(|l| l.contains("->")).count(), 3);
    let r = mospace(&["dot", "--input", "c2.blk", "--what", "pmo"]);
    assert!(r.stdout.contains("# 6 nodes"));
}

#[test]
fn reports_are_deterministic_and_carry_a_digest() {
    let args = ["pmo", "--input", "spin.blk"];
    let a = mospace(&args);
    let b = mospace(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut lines = a.stdout.lines();
    assert_eq!(lines.next(), Some("# mospace pmo --input spin.blk"));
    let digest = lines.next().unwrap();
    assert!(digest.starts_with("# input sha256:"));
    assert_eq!(digest.len(), "# input sha256:".len() + 64);
    let res = results(&a);
    let mut sorted = res.clone();
    sorted.sort();
    assert_eq!(res, sorted);
}

#[test]
fn copied_input_gives_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("spin.blk");
    std::fs::copy(data("spin.blk"), &copy).unwrap();
    let a = mospace(&["mo", "--input", "spin.blk"]);
    let b = mospace(&["mo", "--input", copy.to_str().unwrap()]);
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&a.stdout), body(&b.stdout));
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32); 12] = [
        (&["validate", "--input", "c3.blk"], 0),
        (&["frobnicate"], 1),
        (&["contexts"], 1),
        (&["contexts", "--input", "c3.blk", "--limit", "many"], 1),
        (&["frame", "--input", "c3.blk", "--site", "nowhere"], 1),
        (&["frame", "--input", "c3.blk", "--site", "gelfand:nope"], 1),
        (&["contexts", "--input", "unknown_atom.blk"], 2),
        (&["contexts", "--input", "dup_universe.blk"], 2),
        (&["contexts", "--input", "empty_block.blk"], 2),
        (&["contexts", "--input", "missing.blk"], 2),
        (&["contexts", "--input", "triangle.blk"], 3),
        (&["pmo", "--input", "c3.blk", "--limit", "3"], 4),
    ];
    for (args, code) in cases {
        let r = mospace(args);
        assert_eq!(r.code, code, "{args:?}: {}", r.stderr);
        if code != 0 {
            assert!(r.stdout.is_empty(), "{args:?}");
            assert!(!r.stderr.is_empty(), "{args:?}");
        }
    }
}

#[test]
fn parse_errors_name_the_line_and_atom() {
    let r = mospace(&["validate", "--input", "unknown_atom.blk"]);
    assert!(r.stderr.contains("line 2"));
    assert!(r.stderr.contains("unknown atom `b`"));
    let r = mospace(&["validate", "--input", "triangle.blk"]);
    assert!(r.stderr.contains("inconsistent identification"));
}

#[test]
fn limits_cover_every_enumeration() {
    for args in [
        &["contexts", "--input", "c3.blk", "--limit", "2"][..],
        &["sections", "--input", "spin.blk", "--limit", "7"],
        &["colorings", "--input", "spin.blk", "--limit", "7"],
        &[
            "frame", "--input", "spin.blk", "--site", "dense", "--limit", "7",
        ],
        &["mo", "--input", "spin.blk", "--limit", "5"],
    ] {
        assert_eq!(mospace(args).code, 4, "{args:?}");
    }
}
