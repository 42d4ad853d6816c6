use std::fs;
use std::path::PathBuf;
use std::process::Command;

use ordtree::cli::{catalog, run, Outcome};

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ordtree-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn go(args: &[&str]) -> Outcome {
    run(args.iter().copied())
}

#[test]
fn help_exits_zero() {
    let o = go(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("Usage"), "{}", o.stdout);
    assert!(o.stdout.contains("check-cones"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(go(&[]).code, 2);
    assert_eq!(go(&["frobnicate"]).code, 2);
    assert_eq!(go(&["check-cones"]).code, 2);
    assert_eq!(go(&["check-cones", "example:integers", "--radius", "x"]).code, 2);
    assert_eq!(go(&["examples", "run", "no-such-example"]).code, 2);
    assert_eq!(go(&["check-cones", "/nonexistent/spec.json"]).code, 2);
}

#[test]
fn malformed_specs_exit_two() {
    let unknown = scratch(
        "unknown.json",
        r#"{"kind":"group-order","version":"1","group":{"family":"integers","rank":3},
            "cones":{"P":{"kind":"cmp","index":0,"op":">","value":0},"U":{"kind":"false"},"L":{"kind":"false"}}}"#,
    );
    let o = go(&["check-cones", unknown.to_str().unwrap()]);
    assert_eq!(o.code, 2, "{o:?}");
    assert!(o.stderr.contains("group.rank"), "{}", o.stderr);

    let version = scratch("version.json", r#"{"kind":"poset","version":"0","labels":["a"]}"#);
    assert_eq!(go(&["check-poset", version.to_str().unwrap()]).code, 2);

    let wrong_kind = scratch("kind.json", r#"{"kind":"poset","version":"1","labels":["a"]}"#);
    assert_eq!(go(&["check-cones", wrong_kind.to_str().unwrap()]).code, 2);

    let o = go(&["quotient", "example:integers", "--subgroup", "{\"kind\":\"nope\"}"]);
    assert_eq!(o.code, 2);
}

#[test]
fn broken_cones_fail_condition_two() {
    let o = go(&["check-cones", "example:integers-broken"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("[FAIL] (2) P·P ⊂ P"), "{}", o.stdout);
    assert!(o.stdout.contains("witness: (1, 1) → 2"), "{}", o.stdout);
}

#[test]
fn dihedral_example_passes_cones_and_roundtrip() {
    let o = go(&["examples", "run", "dihedral", "--radius", "6"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("== dihedral: cone axioms on D_inf ball(6)"));
    assert!(o.stdout.contains("[PASS] (6) disjoint cover"));
    assert!(o.stdout.contains("[PASS] orbit order = cone order on determined pairs"));
    assert!(o.stdout.ends_with("result: PASS\n"));
}

#[test]
fn exit_status_follows_the_catalog() {
    for ex in catalog() {
        let o = go(&["examples", "run", ex.name, "--radius", "4", "--stages", "3"]);
        let want = if ex.expect_pass { 0 } else { 1 };
        assert_eq!(o.code, want, "{}: {}{}", ex.name, o.stdout, o.stderr);
        // Undetermined counts are always printed.
        assert!(o.stdout.contains("undetermined: "), "{}", ex.name);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["examples", "run", "lattice-lex", "--radius", "4"];
    let a = go(&args);
    let b = go(&args);
    let c = run(["--threads", "2"].iter().chain(args.iter()).copied());
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn json_reports_parse() {
    let o = go(&["--json", "roundtrip", "example:integers", "--radius", "4"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["data"]["determined"], v["data"]["total_pairs"]);
    assert!(v["reports"][0]["checks"].as_array().unwrap().len() >= 3);

    let o = go(&["--json", "orbit-order", "example:dihedral", "--radius", "2"]);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["data"]["poset"]["kind"], "poset");
    let path = scratch("orbit-poset.json", &v["data"]["poset"].to_string());
    let o = go(&["check-poset", path.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn emitted_trees_feed_blowup() {
    let o = go(&["build-tree", "example:dihedral", "--stages", "4", "--radius", "4", "--emit", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stderr.contains("result: PASS"));
    let path = scratch("tree.json", &o.stdout);
    let b = go(&["blowup", path.to_str().unwrap()]);
    assert_eq!(b.code, 0, "{}", b.stdout);
    assert!(b.stdout.contains("[PASS] branchless (n_o ≤ 1, n_f ≤ 1)"));
    let dot = go(&["blowup", path.to_str().unwrap(), "--emit", "dot"]);
    assert!(dot.stdout.starts_with("digraph"));

    let dot = go(&["build-tree", "example:integers", "--emit", "dot", "--pairs", "greedy"]);
    assert_eq!(dot.code, 0);
    assert!(dot.stdout.starts_with("digraph"));
}

#[test]
fn quotient_subcommand() {
    let vertical = r#"{"kind":"cmp","index":0,"op":"==","value":0}"#;
    let o = go(&["quotient", "example:lattice-lex", "--subgroup", vertical, "--radius", "4"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("total order: yes"));
    let pred = scratch("even.json", r#"{"kind":"parity","index":0,"modulus":2,"residue":0}"#);
    let arg = format!("@{}", pred.display());
    let o = go(&["quotient", "example:integers", "--subgroup", &arg]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("witness: 1 ∈ B_(0,2) but not in H"), "{}", o.stdout);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ordtree");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["--help"]), Some(0));
    assert_eq!(status(&["check-cones", "example:integers"]), Some(0));
    assert_eq!(status(&["check-cones", "example:integers-broken"]), Some(1));
    assert_eq!(status(&["check-cones", "example:missing"]), Some(2));
}

#[test]
fn sample_specs_run() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let path = |f: &str| dir.join(f).to_str().unwrap().to_string();
    let cases: [(&[&str], i32); 8] = [
        (&["check-cones", "integers.json"], 0),
        (&["check-cones", "integers-broken.json"], 1),
        (&["check-cones", "dihedral.json"], 0),
        (&["check-cones", "free-magnus.json", "--radius", "4"], 0),
        (&["check-poset", "vee.json"], 0),
        (&["blowup", "zigzag.json"], 0),
        (&["orbit-order", "dihedral-orbit.json", "--radius", "3"], 0),
        (&["orbit-order", "lattice-stabilizer.json", "--radius", "2"], 0),
    ];
    for (args, want) in cases {
        let argv: Vec<String> = args.iter().map(|a| if a.ends_with(".json") { path(a) } else { a.to_string() }).collect();
        let o = run(&argv);
        assert_eq!(o.code, want, "{args:?}: {}{}", o.stdout, o.stderr);
    }
    let sub = format!("@{}", path("vertical.json"));
    assert_eq!(go(&["quotient", &path("lattice-lex.json"), "--subgroup", &sub, "--radius", "3"]).code, 0);
}
