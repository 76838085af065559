use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CHAIN: &str = r#"{"space":"lp","p":[2,1],"universe_size":6}
{"id":0,"coords":[[1,1,1],[2,1,1]]}
{"id":1,"coords":[[2,1,1],[3,1,1]]}
{"id":2,"coords":[[4,1,1]]}
"#;

fn kernelkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kernelkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.jsonl"), path(&dir, "b.jsonl"));
    for out in [&a, &b] {
        let o = kernelkit(&[
            "gen",
            "--seed",
            "1",
            "--n",
            "3",
            "--support",
            "fixed:2",
            "--universe",
            "10",
            "--out",
            out,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 4);

    let o = kernelkit(&["gen", "--n", "0", "--space", "c0", "--universe", "5"]);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "{\"space\":\"c0\",\"universe_size\":5}\n"
    );
}

#[test]
fn gen_rejects_impossible_configs() {
    let o = kernelkit(&["gen", "--support", "fixed:20", "--universe", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds universe size"));
    let o = kernelkit(&["gen", "--p", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn partition_of_split_chain() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "chain.jsonl", CHAIN);
    let o = kernelkit(&["partition", &file, "--algo", "both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("algorithms agree: true"));
    let report = stdout_json(&o);
    assert_eq!(report["groups"], serde_json::json!([[0, 2], [1]]));
    assert_eq!(report["report"]["n_groups"], 2);
}

#[test]
fn partition_of_disjoint_units_is_one_group() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "units.jsonl",
        "{\"space\":\"c0\",\"universe_size\":4}\n{\"id\":0,\"coords\":[[0,1,1]]}\n{\"id\":5,\"coords\":[[3,-2,1]]}\n",
    );
    let o = kernelkit(&["partition", &file, "--algo", "graph"]);
    assert_eq!(stdout_json(&o)["groups"], serde_json::json!([[0, 5]]));
}

#[test]
fn partition_names_the_zero_line() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "zero.jsonl",
        "{\"space\":\"c0\",\"universe_size\":4}\n{\"id\":0,\"coords\":[[0,1,1]]}\n\n{\"id\":1,\"coords\":[[2,0,1]]}\n",
    );
    let o = kernelkit(&["partition", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn partition_reads_csv() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "chain.csv",
        "id,label,num,den\n1,3,1,1\n0,1,1,1\n0,2,1,1\n1,2,1,1\n2,4,1,1\n",
    );
    let o = kernelkit(&["partition", &file, "--format", "csv", "--universe", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["groups"], serde_json::json!([[0, 2], [1]]));
    let o = kernelkit(&["partition", &file, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_kernel_by_duality_on_first_axis() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "e1.jsonl",
        "{\"space\":\"lp\",\"p\":[2,1],\"universe_size\":2}\n{\"id\":0,\"coords\":[[0,1,1]]}\n",
    );
    let op = path(&dir, "op.json");
    let o = kernelkit(&["build", "kernel-duality", &file, "--operator-out", &op]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("ker T = span Y: exact"));
    let report = stdout_json(&o);
    assert_eq!(report["certificate"]["kernel"]["holds"], true);
    assert_eq!(report["certificate"]["annihilator_dim"], 1);
    let saved: Value = serde_json::from_str(&fs::read_to_string(&op).unwrap()).unwrap();
    assert_eq!(saved, report["operator"]);

    let o = kernelkit(&["verify", "operator", "--operator", &op, "--family", &file]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn build_kernel_by_quotient_in_c0() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "e1.jsonl",
        "{\"space\":\"c0\",\"universe_size\":2}\n{\"id\":0,\"coords\":[[0,1,1]]}\n",
    );
    let o = kernelkit(&["build", "kernel-quotient", &file]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("ker T = span Y: exact"));

    let o = kernelkit(&["build", "kernel-duality", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("quotient construction"));
}

#[test]
fn build_dense_image_of_chain() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "chain.jsonl", CHAIN);
    let o = kernelkit(&["build", "dense-image", &file]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("rank = dim span D: exact"));
    let cert = &stdout_json(&o)["certificate"];
    assert_eq!(
        (cert["rank"].as_u64(), cert["dim_span"].as_u64()),
        (Some(3), Some(3))
    );

    let o = kernelkit(&["build", "dense-image", &file, "--mode", "float"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("within tolerance"));
}

#[test]
fn corrupt_operator_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let family = write(
        &dir,
        "e1.jsonl",
        "{\"space\":\"lp\",\"p\":[2,1],\"universe_size\":2}\n{\"id\":0,\"coords\":[[0,1,1]]}\n",
    );
    // The identity has a trivial kernel, not span{e1}.
    let op = write(
        &dir,
        "op.json",
        r#"{"domain":{"space":"lp","p":[2,1],"universe_size":2},"codomain":{"space":"lp","p":[2,1],"universe_size":2},"triplets":[[0,0,1,1],[1,1,1,1]]}"#,
    );
    let o = kernelkit(&["verify", "operator", "--operator", &op, "--family", &family]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("witness"));
    assert_eq!(stdout_json(&o)["holds"], false);

    let garbage = write(&dir, "bad.json", "{\"domain\": 3}");
    let o = kernelkit(&[
        "verify",
        "operator",
        "--operator",
        &garbage,
        "--family",
        &family,
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = kernelkit(&["verify", "lemma25", "--instances", "0"]);
    assert!(o.status.success());
    let report = stdout_json(&o);
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"][0]["instances"], 0);

    let dir = TempDir::new().unwrap();
    let out = path(&dir, "all.json");
    let o = kernelkit(&[
        "verify",
        "all",
        "--instances",
        "20",
        "--seed",
        "7",
        "--out",
        &out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["suites"].as_array().unwrap().len(), 7);

    let o = kernelkit(&["verify", "duality", "--instances", "20", "--mode", "float"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn bench_hash_is_stable() {
    let run = |threads: &str| {
        let o = kernelkit(&[
            "bench",
            "--n",
            "1000",
            "--universe",
            "10000",
            "--seed",
            "3",
            "--threads",
            threads,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        stdout_json(&o)
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a["hash"], b["hash"]);
    assert_eq!(a["n_vectors"], 1000);
    assert!(a["throughput_vectors_per_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(kernelkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kernelkit(&["partition"]).status.code(), Some(2));
    let missing = Path::new("/nonexistent/family.jsonl").to_str().unwrap();
    assert_eq!(kernelkit(&["partition", missing]).status.code(), Some(2));
}
