use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bitprobe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitprobe")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_store_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k44.txt");
    let state = dir.path().join("s.state");
    assert!(bitprobe(&["graph", "build", "--family", "kbb", "--a", "4", "--out", p(&graph)]).status.success());
    assert!(std::fs::read_to_string(&graph).unwrap().starts_with("8 16\n"));

    let out = bitprobe(&["graph", "girth", p(&graph)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains('4'));

    let out = bitprobe(&[
        "scheme",
        "build",
        "--scheme",
        "ca",
        "--m",
        "96",
        "--n",
        "3",
        "--graph",
        p(&graph),
        "--set",
        "1,50,95",
        "--out",
        p(&state),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["space_bits"], 64);

    for x in 0..96 {
        let out = bitprobe(&["scheme", "query", "--state", p(&state), "--x", &x.to_string()]);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["member"], [1, 50, 95].contains(&x), "x = {x}");
        assert_eq!(v["audit"]["pass"], true);
    }

    let out = bitprobe(&["scheme", "query", "--state", p(&state), "--x", "50", "--dump-transcript"]);
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["addresses"][0]["region"], "A");
    assert_eq!(lines[1]["addresses"][0]["region"], "B");
}

#[test]
fn orient_reports_a_safe_orientation() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c6.txt");
    std::fs::write(&graph, "6 6\n0 1\n0 5\n1 2\n2 3\n3 4\n4 5\n").unwrap();
    let out = bitprobe(&["orient", "--graph", p(&graph), "--green", "0,2,4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["safe"], true);
    assert_eq!(v["toward_larger"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_and_scale() {
    let out = bitprobe(&["verify", "--scheme", "qn23", "--m", "64", "--n", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["sets_tested"], 1 + 64 + 2016);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let out = bitprobe(&["scale", "--scheme", "qn22", "--m", "16,100,1000", "--n", "2", "--csv", p(&csv)]);
    assert!(out.status.success());
    assert!(json(&out)["fit"]["slope"].as_f64().unwrap() > 0.4);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn over_budget_verification_falls_back_to_sampling() {
    let out = Command::new(env!("CARGO_BIN_EXE_bitprobe"))
        .args(["verify", "--scheme", "cv", "--m", "200", "--n", "4", "--count", "7"])
        .env("BITPROBE_BUDGET", "1000")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["mode"]["mode"], "SAMPLED");
    assert_eq!(v["report"]["sets_tested"], 7);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(bitprobe(&["scheme", "query", "--state", "/nonexistent/state", "--x", "1"]).status.code(), Some(2));
    assert_eq!(bitprobe(&["verify", "--scheme", "ca", "--m", "10", "--n", "2", "--k", "0"]).status.code(), Some(2));
    assert_eq!(
        bitprobe(&["scheme", "build", "--scheme", "nope", "--m", "1", "--n", "1", "--out", "x"]).status.code(),
        Some(2)
    );
}

#[test]
fn fixtures_all_pass() {
    let out = bitprobe(&["fixtures"]);
    assert!(out.status.success());
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 11);
    assert!(lines.iter().all(|l| l["pass"] == true));
}

#[test]
fn brute_force_finds_no_orientation_for_the_tight_example() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let green = std::fs::read_to_string(data.join("tight_right.green")).unwrap();
    let graph = data.join("tight_right.graph");
    let out = bitprobe(&["orient", "--graph", p(&graph), "--green", green.trim(), "--brute-force"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["safe"], false);
}

#[test]
fn forests_split_an_explicit_subset() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k4.txt");
    std::fs::write(&graph, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = bitprobe(&["forests", "split", "--graph", p(&graph), "--subset", "0,1,2,3"]);
    assert!(out.status.success());
    let v = json(&out);
    let sizes = [&v["partition"]["forest1"], &v["partition"]["forest2"]].map(|f| f.as_array().unwrap().len());
    assert_eq!(sizes[0] + sizes[1], 6);
}
