use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn irslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irslab")).args(args).env_remove("IRSLAB_MAX_ORDER").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn subgroups_of_fixture_groups() {
    let out = irslab(&["subgroups", "--group", &path("s3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 6);
    assert_eq!(v["class_count"], 4);
    assert_eq!(json(&irslab(&["subgroups", "--group", &path("c2.json")]))["count"], 2);
}

#[test]
fn subgroups_exit_codes() {
    assert_eq!(irslab(&["subgroups", "--group", &path("c300.json")]).status.code(), Some(3));
    let raised = Command::new(env!("CARGO_BIN_EXE_irslab"))
        .args(["subgroups", "--group", &path("c300.json")])
        .env("IRSLAB_MAX_ORDER", "300")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
    assert_eq!(json(&raised)["count"], 18);
    assert_eq!(irslab(&["subgroups", "--group", &path("empty.json")]).status.code(), Some(2));
    assert_eq!(irslab(&["subgroups", "--group", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(irslab(&["subgroups"]).status.code(), Some(2));
}

#[test]
fn mtp_verify_exit_codes() {
    let group = path("s3.json");
    let ok = irslab(&["mtp-verify", "--measure", &path("s3-invariant.json"), "--group", &group]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["violations"].as_array().unwrap().len(), 0);

    let bad = irslab(&["mtp-verify", "--measure", &path("s3-noninvariant.json"), "--group", &group]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!json(&bad)["violations"].as_array().unwrap().is_empty());

    assert_eq!(irslab(&["mtp-verify", "--measure", &path("empty.json"), "--group", &group]).status.code(), Some(2));
    assert_eq!(irslab(&["mtp-verify", "--measure", &path("s3-invariant.json")]).status.code(), Some(2));
    assert_eq!(irslab(&["mtp-verify", "--measure", &path("s3.json"), "--group", &group]).status.code(), Some(2));
    let wrong_group = irslab(&["mtp-verify", "--measure", &path("s3-invariant.json"), "--group", &path("c2.json")]);
    assert_eq!(wrong_group.status.code(), Some(2));
}

#[test]
fn mtp_verify_on_graphs() {
    for (file, code) in [("free-invariant.json", 0), ("free-noninvariant.json", 1)] {
        let out = irslab(&["mtp-verify", "--measure", &path(file), "--mode", "graph", "--radius", "2"]);
        assert_eq!(out.status.code(), Some(code), "{file}");
        let v = json(&out);
        assert_eq!(v["consistent"], true);
        assert_eq!(v["invariant"], code == 0);
        assert_eq!(irslab(&["mtp-verify", "--measure", &path(file)]).status.code(), Some(code));
    }
    let finite = irslab(&[
        "mtp-verify",
        "--measure",
        &path("s3-invariant.json"),
        "--group",
        &path("s3.json"),
        "--mode",
        "graph",
    ]);
    assert_eq!(finite.status.code(), Some(2));
}

#[test]
fn free_enumerate_counts() {
    for (index, count) in [(1, 1), (2, 3), (3, 13)] {
        let out = irslab(&["free-enumerate", "--rank", "2", "--index", &index.to_string()]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["count"], count);
        assert_eq!(v["tables"].as_array().unwrap().len(), count);
    }
    let dot = json(&irslab(&["free-enumerate", "--rank", "2", "--index", "2", "--dot"]));
    assert!(dot["tables"][0]["dot"].as_str().unwrap().contains("digraph"));
    assert_eq!(irslab(&["free-enumerate", "--rank", "2", "--index", "7"]).status.code(), Some(3));
    assert_eq!(irslab(&["free-enumerate", "--rank", "0", "--index", "2"]).status.code(), Some(2));
}

#[test]
fn lie_commands() {
    let sol = json(&irslab(&["lie", "modular", "--group", "sol"]));
    assert_eq!(sol["estimates"].as_array().unwrap().len(), 10);
    assert_eq!(sol["withinTolerance"], true);
    assert!(sol["maxDeviationFromOne"].as_f64().unwrap() <= 1e-3);

    let aff = json(&irslab(&["lie", "modular", "--group", "aff", "--element", "2,0"]));
    assert!((aff["estimates"][0]["estimate"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(irslab(&["lie", "modular", "--group", "aff", "--element", "-1,0"]).status.code(), Some(2));

    let scalings = irslab(&["lie", "admits", "--group", "aff", "--subgroup", "scalings"]);
    assert_eq!(scalings.status.code(), Some(0));
    assert_eq!(json(&scalings)["admits"], false);
    assert_eq!(json(&irslab(&["lie", "admits", "--group", "sol", "--subgroup", "n"]))["admits"], true);
    assert_eq!(irslab(&["lie", "admits", "--group", "so3", "--subgroup", "n"]).status.code(), Some(2));

    let cont = json(&irslab(&["lie", "continuity", "--family", "lattice-in-R"]));
    assert_eq!(cont["converged"], true);
    assert_eq!(cont["indices"].as_array().unwrap().last().unwrap(), 64);
    let closed = json(&irslab(&["lie", "closedness", "--family", "center-lattices-in-heis"]));
    assert_eq!(closed["closed"], true);
}

#[test]
fn tolerance_flag_reaches_the_check() {
    let strict = json(&irslab(&["lie", "modular", "--group", "aff", "--tolerance", "1e-3"]));
    assert_eq!(strict["tolerance"], 1e-3);
    assert_eq!(strict["withinTolerance"], false);
}

#[test]
fn reports_from_partial_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let run_s = run.to_string_lossy().into_owned();
    let out = irslab(&["suite", "--out", &run_s, "--only", "discrete-mtp,orbit-relation"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = irslab(&["report", &run_s]);
    assert_eq!(report.status.code(), Some(0));
    let v = json(&report);
    assert_eq!(v["passed"], 2);
    assert_eq!(v["skipped"], 6);
    let rows = v["sections"].as_array().unwrap();
    assert_eq!(rows.iter().find(|r| r["id"] == "graph-mtp").unwrap()["status"], "skipped");
    assert!(String::from_utf8_lossy(&report.stderr).contains("SKIPPED"));

    assert_eq!(irslab(&["report", &dir.path().join("missing").to_string_lossy()]).status.code(), Some(2));
    assert_eq!(irslab(&["suite", "--only", "discrete-mtp"]).status.code(), Some(2));
    assert_eq!(irslab(&["suite", "--out", &run_s, "--only", "nonsense"]).status.code(), Some(2));
}

#[test]
fn failed_sections_make_the_report_fail() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("disintegration.json"), r#"{"passed": false}"#).unwrap();
    let report = irslab(&["report", &dir.path().to_string_lossy()]);
    assert_eq!(report.status.code(), Some(1));
    assert_eq!(json(&report)["failed"], 1);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let code = irslab(&[
            "--seed",
            "17",
            "suite",
            "--out",
            &out.to_string_lossy(),
            "--only",
            "discrete-mtp,graph-mtp,disintegration",
        ]);
        assert_eq!(code.status.code(), Some(0));
        outputs.push(std::fs::read(out.join("graph-mtp.json")).unwrap());
        outputs.push(std::fs::read(out.join("config.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[1], outputs[3]);
    let modular = |seed: &str| irslab(&["--seed", seed, "lie", "modular", "--group", "heis", "--samples", "3"]).stdout;
    assert_eq!(modular("5"), modular("5"));
    assert_ne!(modular("5"), modular("6"));
}
