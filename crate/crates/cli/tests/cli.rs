//! End-to-end tests of the `hmfw` binary: documented flows, exit codes,
//! and byte-stable JSON output.

use std::process::{Command, Output};

fn hmfw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmfw"))
        .args(args)
        .env_remove("HMFW_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn derive_symbolic_cubic_reports_family() {
    let out = hmfw(&[
        "derive",
        "--p",
        "sym:pmin=2",
        "--orbits",
        "3",
        "--k",
        "1,1,κ",
        "--kappa-min",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kprime"]["k"], serde_json::json!(["p", "p+1", "κ-1"]));
    assert_eq!(v["kmu"][0]["k"], serde_json::json!(["p", "p+1", "κ+1"]));
    assert_eq!(v["kmu"][0]["l"], serde_json::json!(["0", "0", "-1"]));
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["final"], serde_json::json!(["1", "1", "κ"]));
}

#[test]
fn derive_accepts_ascii_kappa_alias() {
    let ascii = hmfw(&[
        "derive", "--p", "sym:pmin=2", "--orbits", "3", "--k", "1,1,kappa", "--kappa-min", "3",
        "--format", "json",
    ]);
    let unicode = hmfw(&[
        "derive", "--p", "sym:pmin=2", "--orbits", "3", "--k", "1,1,κ", "--kappa-min", "3",
        "--format", "json",
    ]);
    assert_eq!(ascii.status.code(), Some(0));
    assert_eq!(stdout(&ascii), stdout(&unicode));
}

#[test]
fn exit_codes_follow_policy() {
    // Hypothesis failure: 1.
    let out = hmfw(&["derive", "--p", "5", "--orbits", "2", "--k", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    // Length mismatch: 2.
    let out = hmfw(&["derive", "--p", "5", "--orbits", "2", "--k", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    // Unparseable entry: 2.
    let out = hmfw(&["derive", "--p", "5", "--orbits", "2", "--k", "1,zzz"]);
    assert_eq!(out.status.code(), Some(2));
    // Symbol without a declared bound: 2.
    let out = hmfw(&["derive", "--p", "5", "--orbits", "3", "--k", "1,1,κ"]);
    assert_eq!(out.status.code(), Some(2));
    // Bounds too weak to decide: 3.
    let out = hmfw(&[
        "derive", "--p", "sym:pmin=2", "--orbits", "3", "--k", "1,1,κ", "--kappa-min", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // Unknown subcommand (clap usage error): 2.
    let out = hmfw(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_stable() {
    let args = [
        "derive", "--p", "sym:pmin=2", "--orbits", "8", "--k", "1,1,κ,2,2,1,2,2", "--kappa-min",
        "3", "--format", "json",
    ];
    let a = hmfw(&args);
    let b = hmfw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let a = hmfw(&["example", "eight-tuple", "--format", "json"]);
    let b = hmfw(&["example", "eight-tuple", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reduce_constant_run_instance() {
    let out = hmfw(&[
        "reduce", "--p", "5", "--orbits", "4", "--k", "0,5,5,6", "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("final\t1,1,1,1"));
    assert!(text.contains("chain\t0.0:always 0.1:always 0.2:always"));
    assert!(text.contains("cone\talways"));
}

#[test]
fn reduce_symbolic_cofactor_recovers_input() {
    let out = hmfw(&[
        "reduce",
        "--p",
        "sym:pmin=2",
        "--orbits",
        "8",
        "--k",
        "0,p+1,κ,1,p+2,0,p+1,p+2",
        "--kappa-min",
        "3",
        "--format",
        "tsv",
    ]);
    // The divisions are all certain; membership of the result in the cone
    // is not decidable under the bounds, which the exit code reports.
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("final\t1,1,κ,2,2,1,2,2"));
    assert!(text.contains("cone\tindeterminate"));
}

#[test]
fn reduce_in_cone_is_empty_chain() {
    let out = hmfw(&[
        "reduce", "--p", "5", "--orbits", "2", "--k", "3,3", "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("chain\t\n"));
}

#[test]
fn examples_match_their_goldens() {
    for name in ["quadratic-cubic", "k2-equals-2", "eight-tuple"] {
        let out = hmfw(&["example", name, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "example {name}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["golden"]["status"], "ok", "example {name}");
        assert_eq!(v["report"]["verdict"], "verified", "example {name}");
    }
    let out = hmfw(&["example", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reports_failing_labels() {
    let out = hmfw(&[
        "check", "--p", "5", "--orbits", "3", "--k", "1,1,6", "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("hypothesis.mtilde_not_one_mod_p\tnever"));
    assert!(text.contains("failing\tminimal_cone mtilde_not_one_mod_p"));

    let out = hmfw(&["check", "--p", "5", "--orbits", "3", "--k", "1,1,3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_writes_reports_and_counts() {
    let dir = std::env::temp_dir().join(format!("hmfw-cli-sweep-{}", std::process::id()));
    let out_dir = dir.to_str().unwrap();
    let out = hmfw(&[
        "sweep", "--p", "2,3", "--max-d", "2", "--out", out_dir, "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let printed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(printed["totals"]["failed"], 0);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["totals"], printed["totals"]);
    let jsonl = std::fs::read_to_string(dir.join("counterexamples.jsonl")).unwrap();
    assert!(jsonl.is_empty());
    std::fs::remove_dir_all(&dir).ok();

    let out = hmfw(&["sweep", "--max-d", "0", "--out", out_dir]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn format_env_variable_sets_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_hmfw"))
        .args(["check", "--p", "5", "--orbits", "3", "--k", "1,1,3"])
        .env("HMFW_FORMAT", "json")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["hypotheses"]["minimal_cone"], "always");
}
