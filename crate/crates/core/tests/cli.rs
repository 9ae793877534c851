use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn conerank(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conerank")).args(args).env("CONERANK_STORE", store).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn ingest_reports_size_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "id,grade,credits,label\na,1.5,30,1\nb,2,25,0\nc,3.25,10,\n");
    let out = conerank(dir.path(), &["ingest", &f]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["alternatives"].as_array().unwrap().len(), 3);
    assert_eq!(v["alternatives"][2]["coords"], serde_json::json!(["13/4", "10"]));
    assert_eq!(v["labels"]["a"], "acceptable");
    assert_eq!(v["labels"]["c"], "unlabeled");
}

#[test]
fn ingest_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("dup.csv", "id,a,b\nx,1,2\ny,3,4\nx,5,6\n"),
        ("nan.csv", "id,a,b\nx,1,two\ny,3,4\n"),
        ("one.csv", "id,a,b\nx,1,2\n"),
        ("flat.csv", "id,a\nx,1\ny,2\n"),
    ] {
        let f = write(dir.path(), name, text);
        let out = conerank(dir.path(), &["ingest", &f]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
    let f = write(dir.path(), "dup2.csv", "id,a,b\nx,1,2\ny,3,4\nx,5,6\n");
    let err = String::from_utf8(conerank(dir.path(), &["ingest", &f]).stderr).unwrap();
    assert!(err.contains("row 4"), "{err}");
}

#[test]
fn chain_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "chain.csv", "id,c1,c2\na,0,0\nb,1,1\n");
    let v = json(&conerank(dir.path(), &["rank", "--csv", &f]));
    assert_eq!(v["ranks"], serde_json::json!({ "a": 1, "b": 2 }));
}

#[test]
fn cone_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "chain.csv", "id,c1,c2\na,0,0\nb,1,1\n");
    for cone in [r#"{"rays": []}"#, r#"{"rays": [[0, 0]]}"#] {
        assert_eq!(conerank(dir.path(), &["rank", "--csv", &f, "--cone", cone]).status.code(), Some(3));
    }
    let bounds = write(dir.path(), "bad.json", r#"{"weight_bounds": {"min": [0.6, 0.6], "max": [1, 1]}}"#);
    assert_eq!(conerank(dir.path(), &["rank", "--csv", &f, "--cone", &bounds]).status.code(), Some(3));
    let f3 = write(dir.path(), "three.csv", "id,c1,c2,c3\na,0,0,0\nb,1,2,3\n");
    let wedge = r#"{"rays": [[1,0,0],[-1,0,0],[0,1,0]]}"#;
    assert_eq!(conerank(dir.path(), &["rank", "--csv", &f3, "--cone", wedge]).status.code(), Some(4));
    let both = r#"{"rays": [[1,0]], "dual_rays": [[1,0]]}"#;
    assert_eq!(conerank(dir.path(), &["rank", "--csv", &f, "--cone", both]).status.code(), Some(2));
}

#[test]
fn reversal_jumps_from_one_to_six() {
    let dir = tempfile::tempdir().unwrap();
    let base = write(dir.path(), "base.csv", "id,c1,c2\nx,1,0\ny,0,2\np,-1,1\n");
    let add = write(
        dir.path(),
        "add.csv",
        "id,c1,c2\nz1,0.8,-0.1\nz2,0.7,-0.2\nz3,0.6,-0.3\nz4,0.5,-0.4\nz5,0.4,-0.5\n",
    );
    let v = json(&conerank(dir.path(), &["reversal", "--csv", &base, "--add", &add]));
    let pairs = v["report"]["pairs"].as_array().unwrap();
    let xy = pairs.iter().find(|p| p["x"] == "x" && p["y"] == "y").unwrap();
    assert_eq!(xy["kind"], "strict");
    assert_eq!(xy["ranks_before"], serde_json::json!([1, 2]));
    assert_eq!(xy["ranks_after"], serde_json::json!([6, 2]));
}

#[test]
fn stored_dataset_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "id,c1,c2\nx1,0,4\nx2,2,2\nx3,4,0\n");
    let id = json(&conerank(dir.path(), &["ingest", &f]))["id"].as_str().unwrap().to_string();
    let v = json(&conerank(
        dir.path(),
        &["setrank", "--dataset", &id, "--set", "all=x1,x2,x3", "--set", "pair=x2,x3", "--compare", "all:pair"],
    ));
    assert_eq!(v["comparisons"][0]["report"]["rnabla"], serde_json::json!([2, 2]));
    let add = write(dir.path(), "add.csv", "id,c1,c2\nx4,3,3\n");
    let out = conerank(dir.path(), &["reversal", "--dataset", &id, "--add", &add, "--commit"]);
    assert_eq!(json(&out)["committed"]["revision"], 2);
    let stale = conerank(dir.path(), &["rank", "--dataset", &id, "--revision", "1"]);
    assert_eq!(stale.status.code(), Some(2));
    assert_eq!(json(&stale)["error"]["code"], "revision_conflict");
    let v = json(&conerank(dir.path(), &["classify", "--dataset", &id, "--alpha", "50", "--n", "2"]));
    assert_eq!(v["level_set"]["n"], 2);
}

#[test]
fn plot_and_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "id,c1,c2\nx1,0,4\nx2,2,2\nx3,4,0\n");
    let svg = dir.path().join("plot.svg");
    let out = conerank(dir.path(), &["rank", "--csv", &f, "--plot", svg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<circle"));
    let desc: Value = serde_json::from_str(&std::fs::read_to_string(svg.with_extension("json")).unwrap()).unwrap();
    assert_eq!(desc["points"].as_array().unwrap().len(), 3);
    assert_eq!(desc["wedge"]["rays"].as_array().unwrap().len(), 2);

    let out = conerank(dir.path(), &["compare", "--csv", &f, "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,topsis,weighted_sum,weighted_sum_exact,cone_rank\n"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn cohort_round_trips_through_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let out = conerank(dir.path(), &["cohort", "--n", "12", "--seed", "3"]);
    let f = write(dir.path(), "cohort.csv", &String::from_utf8(out.stdout).unwrap());
    let v = json(&conerank(dir.path(), &["ingest", &f]));
    assert_eq!(v["alternatives"].as_array().unwrap().len(), 12);
    assert_eq!(v["criteria"], serde_json::json!(["grade", "credits"]));
}
