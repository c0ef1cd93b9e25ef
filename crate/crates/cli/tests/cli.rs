use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn ifol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn eval_stored_fact() {
    let o = ifol(&["eval", "likes(ann, bob)", "--kb", &data("likes.kb")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "t\n");
}

#[test]
fn eval_each_semantics() {
    let kb = data("likes.kb");
    for sem in ["direct", "concept", "kripke"] {
        let o = ifol(&[
            "eval",
            "forall x. likes(x, ann)",
            "--kb",
            &kb,
            "--semantics",
            sem,
        ]);
        assert_eq!(stdout(&o), "f\n", "{sem}");
    }
    let o = ifol(&[
        "eval",
        "likes(nobody, ann)",
        "--kb",
        &kb,
        "--semantics",
        "all",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "PASS  likes(nobody, ann)  v*=bot  hI=∅  K=bot\n"
    );
}

#[test]
fn eval_named_queries() {
    let o = ifol(&["eval", "--kb", &data("likes.kb")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "mutual\tt\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("fans"));
}

#[test]
fn bad_input_exits_2() {
    let kb = data("likes.kb");
    for args in [
        vec!["eval", "likes(ann, <likes(ann, bob)>)", "--kb", &kb],
        vec!["eval", "likes(ann)", "--kb", &kb],
        vec!["eval", "likes(ann, bob", "--kb", &kb],
        vec!["eval", "likes(x, ann)", "--kb", &kb],
        vec!["eval", "likes(ann, bob)"],
        vec!["eval", "t", "--kb", "/nonexistent/file.kb"],
        vec!["fuse", "--kb", &kb],
        vec!["eval", "--semantics", "other", "#t"],
    ] {
        let o = ifol(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn extension_dump() {
    let kb = data("likes.kb");
    let o = ifol(&["ext", "likes(x, y)", "--kb", &kb]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "# extension likes(x, y) arity 2\nann\tbob\tt\nbob\tann\ttop\ncal\tcal\tf\n"
    );
    let o = ifol(&[
        "ext",
        "likes(x, ann)",
        "--kb",
        &kb,
        "--complete",
        "--semantics",
        "all",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "# extension likes(x, ann) arity 1\nann\tbot\nbob\ttop\ncal\tbot\n"
    );
}

#[test]
fn sentence_extensions() {
    let kb = data("likes.kb");
    let o = ifol(&["ext", "likes(ann, bob)", "--kb", &kb]);
    assert_eq!(stdout(&o), "# extension likes(ann, bob) arity 0\nt\n");
    let o = ifol(&["ext", "likes(bob, bob)", "--kb", &kb]);
    assert_eq!(stdout(&o), "# extension likes(bob, bob) arity 0\n");
}

#[test]
fn commute_is_reproducible() {
    let a = ifol(&["commute", "--count", "40", "--seed", "9"]);
    let b = ifol(&["commute", "--count", "40", "--seed", "9"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 80);
    assert!(stdout(&a).lines().all(|l| l.starts_with("PASS")));
    let c = ifol(&["commute", "--count", "40", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn commute_over_a_kb() {
    let o = ifol(&["commute", "--count", "50", "--kb", &data("likes.kb")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("likes("));
}

#[test]
fn kripke_check() {
    let kb = data("likes.kb");
    let o = ifol(&["kripke-check", "forall x. likes(x, nobody)", "--kb", &kb]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "PASS  forall x. likes(x, nobody)  v*=bot  K=bot\n"
    );
    let o = ifol(&["kripke-check", "--count", "30", "--seed", "4"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("hI="));
}

#[test]
fn fuse_reports_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fused.kb");
    let out = out.to_str().unwrap();
    let o = ifol(&[
        "fuse",
        "--kb",
        &data("likes.kb"),
        "--kb",
        &data("rumours.kb"),
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "conflict\tlikes(ann, bob)\n");
    let o = ifol(&["eval", "likes(ann, bob)", "--kb", out]);
    assert_eq!(stdout(&o), "top\n");
    let o = ifol(&["eval", "likes(bob, cal)", "--kb", out]);
    assert_eq!(stdout(&o), "t\n");
}

#[test]
fn fuse_with_empty_is_identity() {
    let kb = data("likes.kb");
    let fused = ifol(&["fuse", "--kb", &kb, "--kb", &data("empty.kb")]);
    let alone = ifol(&["fuse", "--kb", &kb, "--kb", &kb]);
    assert_eq!(code(&fused), 0);
    assert_eq!(fused.stdout, alone.stdout);
    assert!(String::from_utf8_lossy(&fused.stderr).contains("0 conflicts"));
}

#[test]
fn merge_policy_on_load() {
    let (a, b) = (data("likes.kb"), data("rumours.kb"));
    let o = ifol(&["eval", "likes(ann, bob)", "--kb", &a, "--kb", &b]);
    assert_eq!(stdout(&o), "f\n");
    let o = ifol(&[
        "eval",
        "likes(ann, bob)",
        "--kb",
        &a,
        "--kb",
        &b,
        "--merge",
        "k-join",
    ]);
    assert_eq!(stdout(&o), "top\n");
}

#[test]
fn validate_summary() {
    let kb = data("likes.kb");
    let o = ifol(&["validate", "--kb", &kb]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "ok 1 sorts, 4 constants, 2 predicates, 4 facts, 2 queries\n"
    );
    let o = ifol(&["validate", "likes(x, ann)", "--kb", &kb]);
    assert_eq!(stdout(&o), "ok open x:person likes(x, ann)\n");
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ext.txt");
    let o = ifol(&[
        "ext",
        "--kb",
        &data("likes.kb"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("# extension mutual arity 0\nt\n# extension fans arity 2\n"));
}

#[test]
fn dual_search_runs() {
    let o = ifol(&["dual-search", "--count", "30", "--seed", "1"]);
    assert!(matches!(code(&o), 0 | 3));
    assert!(stdout(&o)
        .lines()
        .all(|l| l.starts_with("SAME") || l.starts_with("DIFF")));
}
