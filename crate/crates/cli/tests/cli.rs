use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().expect("temp dir") }
    }

    fn graph(&self, name: &str, doc: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, doc).expect("write graph");
        path
    }

    fn path(&self, cells: usize) -> PathBuf {
        let edges: Vec<String> = (1..cells).map(|i| format!("[{},{}]", i, i + 1)).collect();
        self.graph(&format!("p{cells}.json"), &format!(r#"{{"L":{cells},"edges":[{}]}}"#, edges.join(",")))
    }
}

fn lateral(args: &[&str]) -> Output {
    lateral_env(args, &[])
}

fn lateral_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lateral"));
    cmd.args(args).env_remove("LATERAL_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = lateral(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Output) -> String {
    assert!(!out.status.success());
    let doc: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    doc["error"]["kind"].as_str().expect("kind").to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().expect("array").iter().map(|s| s.as_str().expect("string").to_string()).collect()
}

#[test]
fn gen_round_trips() {
    let out = lateral(&["gen", "path", "--cells", "3"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"L":3,"edges":[[1,2],[2,3]]}"#);
    let grid = lateral(&["gen", "grid", "--rows", "2", "--cols", "2"]);
    let doc: Value = serde_json::from_slice(&grid.stdout).unwrap();
    assert_eq!(doc["L"], 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);
    assert_eq!(error_kind(&lateral(&["gen", "cycle", "--cells", "2"])), "invalid-generator");
}

#[test]
fn fixed_points_of_three_cells() {
    let sb = Sandbox::new();
    let g = sb.path(3);
    let doc = ok_json(&["fixed-points", "--graph", p(&g)]);
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["cover"], serde_json::json!([1, 3]));
    assert_eq!(rows[0]["full"], "101010");
    assert_eq!(rows[1]["cover"], serde_json::json!([2]));
    assert_eq!(rows[1]["reduced"], "010");
    let k2 = ok_json(&["fixed-points", "--graph", p(&g), "--k", "2"]);
    assert_eq!(k2.as_array().unwrap().len(), 1);
}

#[test]
fn trap_space_subcommands() {
    let sb = Sandbox::new();
    let g = sb.path(3);
    let all = ok_json(&["trap-spaces", "--graph", p(&g), "--enumerate"]);
    assert_eq!(all["count"], 7);
    let mut names = strings(&all["trap_spaces"]);
    names.sort();
    assert_eq!(names, ["******", "*10*01", "01*10*", "010*01", "01010*", "010101", "101010"]);
    assert_eq!(all["hasse_edges"].as_array().unwrap().len(), 7);

    let dot = lateral(&["trap-spaces", "--graph", p(&g), "--enumerate", "--out", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));

    let yes = ok_json(&["trap-spaces", "--graph", p(&g), "--model", "reduced", "--check", "*10"]);
    assert_eq!(yes["trap_space"], true);
    assert_eq!(yes["representative"], "010");
    let no = ok_json(&["trap-spaces", "--graph", p(&g), "--check", "0*0101"]);
    assert_eq!(no["trap_space"], false);
    assert!(no["violation"]["clause"].is_string());

    let max = ok_json(&["trap-spaces", "--graph", p(&g), "--model", "reduced", "--maximal"]);
    let mut m = strings(&max["maximal"]);
    m.sort();
    assert_eq!(m, ["*10", "01*", "101"]);

    let g5 = sb.path(5);
    let around = ok_json(&["trap-spaces", "--graph", p(&g5), "--minimal-containing", "0101010101", "--cells", "3"]);
    assert_eq!(around["trap_space"], "01*1010*01");
    assert_eq!(around["derivation"], "closed-form");
    let k2 = ok_json(&[
        "trap-spaces",
        "--graph",
        p(&g5),
        "--k",
        "2",
        "--model",
        "reduced",
        "--minimal-containing",
        "01010",
        "--cells",
        "1",
    ]);
    assert_eq!(k2["derivation"], "closure-derived");

    let none = lateral(&["trap-spaces", "--graph", p(&g)]);
    assert_eq!(error_kind(&none), "usage");
}

#[test]
fn reach_reports_and_witnesses() {
    let sb = Sandbox::new();
    let g3 = sb.path(3);
    let no = ok_json(&["reach", "--graph", p(&g3), "--from", "011100", "--to", "101010"]);
    assert_eq!(no["reachable"], false);
    assert!(no.get("witness").is_none());

    let yes = ok_json(&["reach", "--graph", p(&g3), "--from", "011100", "--to", "010101", "--witness"]);
    assert_eq!(yes["reachable"], true);
    assert_eq!(yes["witness"]["end"], "010101");

    let g4 = sb.path(4);
    let reduced = ok_json(&["reach", "--graph", p(&g4), "--model", "reduced", "--from", "1001", "--witness"]);
    let mut found = strings(&reduced["reachable_fixed_points"]);
    found.sort();
    assert_eq!(found, ["0101", "1010"]);
    for fp in &found {
        assert_eq!(reduced["witnesses"][fp]["end"], fp.as_str());
    }

    let full = ok_json(&["reach", "--graph", p(&g4), "--from", "10010110", "--to", "01101001", "--witness"]);
    assert_eq!(full["reachable"], true);
    let w = &full["witness"];
    assert_eq!(w["end"], "01101001");
    assert_eq!(w["steps"].as_array().unwrap().len(), w["length"].as_u64().unwrap() as usize);

    let homogeneous = ok_json(&["reach", "--graph", p(&g4), "--from", "11110000", "--witness"]);
    assert_eq!(homogeneous["reachable_fixed_points"].as_array().unwrap().len(), 3);
    for (_, w) in homogeneous["witnesses"].as_object().unwrap() {
        assert_eq!(w["construction"], "homogeneous-to-pattern");
    }

    let k2 = ok_json(&["reach", "--graph", p(&g4), "--model", "reduced", "--k", "2", "--from", "0000"]);
    assert_eq!(k2["derivation"], "oracle");
}

#[test]
fn basins_of_three_cells() {
    let sb = Sandbox::new();
    let g = sb.path(3);
    let strong = ok_json(&["basins", "--graph", p(&g), "--fixed-point", "010101", "--mode", "strong", "--enumerate"]);
    assert_eq!(strong["count"], 7);
    assert!(strings(&strong["states"]).contains(&"011100".to_string()));
    let weak = ok_json(&["basins", "--graph", p(&g), "--fixed-point", "010101", "--mode", "weak", "--enumerate"]);
    assert_eq!(weak["count"], 63);
    let brief = ok_json(&["basins", "--graph", p(&g), "--fixed-point", "010101", "--mode", "weak"]);
    assert!(brief.get("states").is_none());
    assert!(brief["predicate"].is_string());
    let oracle = ok_json(&[
        "basins",
        "--graph",
        p(&g),
        "--model",
        "reduced",
        "--k",
        "2",
        "--fixed-point",
        "010",
        "--mode",
        "strong",
    ]);
    assert_eq!(oracle["derivation"], "oracle");
    assert_eq!(oracle["count"], 8);
    let bad = lateral(&["basins", "--graph", p(&g), "--fixed-point", "000000", "--mode", "weak"]);
    assert_eq!(error_kind(&bad), "not-fixed-point");
}

#[test]
fn perturbation_report() {
    let sb = Sandbox::new();
    let g = sb.path(5);
    let r = ok_json(&["perturb", "--graph", p(&g), "--pattern", "1010101010", "--cells", "3", "--vars", "both"]);
    assert_eq!(r["trap_space"], "**********");
    assert_eq!(r["reachable_fixed_points"].as_array().unwrap().len(), 4);
    assert_eq!(r["cycle_exposed"], true);
    assert_eq!(r["radius"], 2);
    let back = ok_json(&["perturb", "--graph", p(&g), "--pattern", "0101010101", "--cells", "3"]);
    assert_eq!(back["returns_to_original"], true);
    let dot = lateral(&["perturb", "--graph", p(&g), "--pattern", "0101010101", "--cells", "3", "--out", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
    let reduced_delta = lateral(&[
        "perturb",
        "--graph",
        p(&g),
        "--model",
        "reduced",
        "--pattern",
        "01010",
        "--cells",
        "3",
        "--vars",
        "delta",
    ]);
    assert_eq!(error_kind(&reduced_delta), "precondition");
}

#[test]
fn stg_export_and_limits() {
    let sb = Sandbox::new();
    let g = sb.path(2);
    let doc = ok_json(&["stg", "--graph", p(&g)]);
    let mut fps = strings(&doc["fixed_points"]);
    fps.sort();
    assert_eq!(fps, ["0110", "1001"]);
    let dot = lateral(&["stg", "--graph", p(&g), "--out", "dot"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph") && text.trim_end().ends_with('}'));

    let g3 = sb.path(3);
    let capped = lateral_env(&["stg", "--graph", p(&g3)], &[("LATERAL_LIMIT", "4")]);
    assert_eq!(error_kind(&capped), "limit-exceeded");
    let stderr = String::from_utf8(capped.stderr).unwrap();
    assert!(stderr.contains("--limit"));
    let flag_wins = lateral_env(&["stg", "--graph", p(&g3), "--limit", "6"], &[("LATERAL_LIMIT", "4")]);
    assert!(flag_wins.status.success());
}

#[test]
fn energy_check_report() {
    let sb = Sandbox::new();
    let g = sb.path(4);
    for k in ["1", "2", "3"] {
        let r = ok_json(&["energy-check", "--graph", p(&g), "--k", k]);
        assert_eq!(r["violations"], 0);
        assert_eq!(r["has_cycle"], false);
        assert_eq!(r["min_gap"], "1/2");
        assert!(r["transitions"].as_u64().unwrap() > 0);
    }
}

#[test]
fn input_errors_are_machine_readable() {
    let sb = Sandbox::new();
    let split = sb.graph("split.json", r#"{"L":4,"edges":[[1,2],[3,4]]}"#);
    assert_eq!(error_kind(&lateral(&["fixed-points", "--graph", p(&split)])), "disconnected");
    let allowed = ok_json(&["fixed-points", "--graph", p(&split), "--allow-disconnected"]);
    assert_eq!(allowed.as_array().unwrap().len(), 4);

    let broken = sb.graph("broken.json", r#"{"L":2,"edges":[[1,1]]}"#);
    assert_eq!(error_kind(&lateral(&["fixed-points", "--graph", p(&broken)])), "self-loop");
    let garbage = sb.graph("garbage.json", "not json");
    assert_eq!(error_kind(&lateral(&["fixed-points", "--graph", p(&garbage)])), "malformed-graph");
    let missing = sb.dir.path().join("missing.json");
    assert_eq!(error_kind(&lateral(&["fixed-points", "--graph", p(&missing)])), "io");

    let g = sb.path(3);
    assert_eq!(error_kind(&lateral(&["reach", "--graph", p(&g), "--from", "01x"])), "invalid-state");
    assert_eq!(error_kind(&lateral(&["reach", "--graph", p(&g), "--from", "010"])), "dimension-mismatch");
    assert_eq!(error_kind(&lateral(&["trap-spaces", "--graph", p(&g), "--check", "0?"])), "invalid-subspace");
    let unknown = lateral(&["reach", "--graph", p(&g), "--from", "010101", "--bogus"]);
    assert_eq!(error_kind(&unknown), "usage");
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_tabular() {
    let sb = Sandbox::new();
    let g = sb.path(4);
    let args = ["trap-spaces", "--graph", p(&g), "--enumerate"];
    assert_eq!(lateral(&args).stdout, lateral(&args).stdout);
    let table = lateral(&["fixed-points", "--graph", p(&g), "--format", "table"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.starts_with("cover"));
    assert_eq!(text.lines().count(), 2 + 3);
}
