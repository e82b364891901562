use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn prodvc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodvc")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("k4.txt"), "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    fs::write(dir.path().join("c4.txt"), "# square\n4 4\n0 1\n1 2\n2 3\n0 3\n").unwrap();
    let hook = r#"{"factors":[{"n":3,"edges":[[0,1],[1,2]]},{"n":3,"edges":[[0,1],[1,2]]}],
        "vertices":[[0,0],[1,0],[2,0],[2,1],[2,2],[1,2]]}"#;
    fs::write(dir.path().join("hook.json"), hook).unwrap();
    dir
}

#[test]
fn density_and_arboricity() {
    let dir = workdir();
    let d = json(&prodvc(&["density", "k4.txt"], dir.path()));
    assert_eq!(d["density"], "3/2");
    assert_eq!(d["mad"], "3");
    assert_eq!(d["density_approx"], 1.5);
    let a = json(&prodvc(&["arboricity", "k4.txt"], dir.path()));
    assert_eq!(a["arboricity"], 2);
    assert_eq!(a["degeneracy"], 3);
    let h = json(&prodvc(&["density", "hook.json"], dir.path()));
    assert_eq!(h["density"], "5/6");
}

#[test]
fn orientation_exit_codes() {
    let dir = workdir();
    let o = json(&prodvc(&["orient", "--max-outdegree", "2", "k4.txt"], dir.path()));
    assert!(o["outdegrees"].as_array().unwrap().iter().all(|d| d.as_u64().unwrap() <= 2));
    let bad = prodvc(&["orient", "--max-outdegree", "1", "k4.txt"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    let missing = prodvc(&["density", "nope.txt"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn vc_quantities_of_the_hook() {
    let dir = workdir();
    let v = json(&prodvc(&["vcd", "hook.json"], dir.path()));
    assert_eq!(v["vcd"]["value"], 1);
    assert!(v.get("vcd_star").is_none());
    let v = json(&prodvc(&["vcd", "hook.json", "--minor", "--exact-caps", "8", "6"], dir.path()));
    assert_eq!(v["vcd_star"]["value"], 2);
    assert_eq!(v["vcd_star"]["exact"], true);
    assert_eq!(v["vcdens_star"]["value"], "1");
}

#[test]
fn reduction_step() {
    let dir = workdir();
    let r = json(&prodvc(&["reduce", "hook.json", "--factor", "0", "--edge", "1,2"], dir.path()));
    let c = &r["counts"];
    assert_eq!(c["vertices"], 6);
    assert_eq!(c["merged_vertices"].as_u64().unwrap() + c["center_vertices"].as_u64().unwrap(), 6);
    let bad = prodvc(&["reduce", "hook.json", "--factor", "0", "--edge", "0,2"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn classification() {
    let dir = workdir();
    let c = json(&prodvc(&["classify", "c4.txt"], dir.path()));
    assert_eq!(c["chordal"], false);
    assert_eq!(c["dismantlable"], false);
    assert_eq!(c["suboctahedron"], true);
    let k = json(&prodvc(&["classify", "k4.txt"], dir.path()));
    assert_eq!((k["omega"].as_u64(), k["dd"].as_u64(), k["degeneracy"].as_u64()), (Some(4), Some(3), Some(3)));
}

#[test]
fn labels_round_trip() {
    let dir = workdir();
    let enc = prodvc(&["label", "encode", "k4.txt", "--out", "k4.labels"], dir.path());
    assert!(enc.status.success());
    let text = fs::read_to_string(dir.path().join("k4.labels")).unwrap();
    assert_eq!(text.lines().next(), Some("4 3 3"));
    for (x, y, adjacent) in [("0", "1", "true"), ("2", "3", "true"), ("1", "1", "false")] {
        let out = prodvc(&["label", "decode", "k4.labels", x, y], dir.path());
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), adjacent);
    }
    let few = prodvc(&["label", "encode", "k4.txt", "--forests", "2"], dir.path());
    assert_eq!(few.status.code(), Some(1));
}

#[test]
fn verify_report_is_deterministic() {
    let dir = workdir();
    for name in ["a.json", "b.json"] {
        let out = prodvc(&["verify", "--suite", "thm4", "--trials", "25", "--seed", "9", "--out", name], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["schema"], "prodvc-report-1");
    assert_eq!(report["summary"]["failures"], 0);
}

#[test]
fn fuzzing_archives_reproducers() {
    let dir = workdir();
    let out = prodvc(&["fuzz-conj3", "--family", "path", "--sizes", "3,3", "--trials", "100", "--seed", "4"], dir.path());
    let report = json(&out);
    let violated = report["summary"]["claims"]["Conj3"]["violated"].as_u64().unwrap();
    assert!(violated == 0 || !report["archive"].as_array().unwrap().is_empty());
    assert_eq!(report["summary"]["claims"]["Conj3.mad"]["violated"], 0);
}

#[test]
fn generated_instances_feed_other_commands() {
    let dir = workdir();
    let gen = prodvc(&["generate", "--family", "chordal", "--sizes", "4", "--m", "2", "--seed", "5", "--out", "g.json"], dir.path());
    assert!(gen.status.success());
    let again = prodvc(&["generate", "--family", "chordal", "--sizes", "4", "--m", "2", "--seed", "5"], dir.path());
    assert_eq!(fs::read_to_string(dir.path().join("g.json")).unwrap().trim(), String::from_utf8_lossy(&again.stdout).trim());
    json(&prodvc(&["vcd", "g.json", "--minor"], dir.path()));
    json(&prodvc(&["density", "g.json"], dir.path()));
    let unknown = prodvc(&["verify", "--suite", "everything"], dir.path());
    assert_eq!(unknown.status.code(), Some(2));
}
