use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibburn")).args(args).output().expect("spawn fibburn")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn c2_idempotent_table() {
    let v = json(&["ring", "idempotents", "--preset", "cyclic:2,1", "--fiber", "2,1", "--char", "0"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let trivial = &rows[0];
    assert_eq!(trivial["species"], "({0},0)");
    assert_eq!(trivial["[{0},(0)]_C2"], "1/2");
    let sign = &rows[2];
    assert_eq!(sign["[{0,1},(0,0)]_C2"], "1/2");
    assert_eq!(sign["[{0,1},(0,1)]_C2"], "-1/2");
}

#[test]
fn c2_idempotents_in_characteristic_three() {
    let v = json(&["ring", "idempotents", "--preset", "cyclic:2,1", "--char", "3"]);
    // 1/2 = 2 in F₃
    assert_eq!(v["rows"][0]["[{0},(0)]_C2"], "2");
}

#[test]
fn lattice_series_in_characteristic_zero() {
    let v = json(&["lattice", "series", "--p", "2", "--n", "1", "--char", "0", "--max-order", "8"]);
    let chain = v[0]["rows"].as_array().unwrap();
    let mins: Vec<&str> = chain.iter().map(|r| r["minimal_groups"].as_str().unwrap()).collect();
    assert_eq!(mins, ["1", "C2"]);
    assert!(chain.iter().all(|r| r["quotient_dim"] == 1));
    let dims = v[1]["rows"].as_array().unwrap();
    assert_eq!(dims.len(), 3);
    assert!(dims[2].as_object().unwrap().iter().filter(|(k, _)| *k != "term").all(|(_, d)| *d == 0));
}

#[test]
fn lattice_index_sets() {
    let ranks = |q: &str| -> Vec<u64> {
        let v = json(&["lattice", "index", "--p", "2", "--char", q, "--rmax", "6"]);
        v["rows"].as_array().unwrap().iter().map(|r| r["rank"].as_u64().unwrap()).collect()
    };
    assert_eq!(ranks("0"), [0, 1]);
    assert_eq!(ranks("3"), [0, 1, 3, 5]);
}

#[test]
fn group_file_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"label":"Z4","table":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}}"#).unwrap();
    let v = json(&["group", "describe", "--group-file", f.path().to_str().unwrap()]);
    let rows = v["rows"].as_array().unwrap();
    let get = |k: &str| rows.iter().find(|r| r["property"] == k).unwrap()["value"].clone();
    assert_eq!(get("order"), 4);
    assert_eq!(get("subgroups"), 3);
    assert_eq!(get("frattini_order"), 2);
}

#[test]
fn bad_group_file_is_bad_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"label":"bad","table":[[0,1,2],[1,0,2],[2,2,0]]}}"#).unwrap();
    assert_eq!(run(&["group", "describe", "--group-file", f.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["ring", "pairs", "--preset", "cyclic:2"],
        vec!["lattice", "series", "--p", "2", "--char", "2", "--max-order", "8"],
        vec!["lattice", "series", "--p", "2", "--max-order", "12"],
        vec!["oracle", "verify", "--max-order", "6"],
        vec!["check", "nonsense"],
        vec!["biset", "decompose", "--left", "dihedral8", "--right", "trivial", "--pair", r#"{"members":[0]}"#],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn mackey_through_the_cli() {
    // sign twist of C₂ composed with the sign character of C₂ → trivial character of C₂
    let v = json(&[
        "biset", "mackey", "--left", "cyclic:2,1", "--mid", "cyclic:2,1", "--right", "trivial",
        "--x", r#"{"members":[0,3],"values":[0,1]}"#,
        "--y", r#"{"members":[0,1],"values":[0,1]}"#,
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["pair"], "[{0,1},(0,0)]_C2x1");
    assert_eq!(rows[0]["coefficient"], "1");
}

#[test]
fn act_and_multiply_agree_with_the_regular_module() {
    let unit = r#"[{"members":[0,1,2,3]}]"#;
    let x = r#"[{"members":[0,2],"values":[0,1],"coeff":-2}]"#;
    let prod = json(&["ring", "multiply", "--preset", "cyclic:2,2", "--x", unit, "--y", x]);
    assert_eq!(prod["rows"][0]["coefficient"], "-2");
    let diag: Vec<u32> = (0..4).map(|g| g * 4 + g).collect();
    let pair = format!(r#"{{"members":{diag:?}}}"#);
    let act = json(&["biset", "act", "--left", "cyclic:2,2", "--right", "cyclic:2,2", "--pair", &pair, "--element", x]);
    assert_eq!(act["rows"], prod["rows"]);
}

#[test]
fn decomposition_has_seven_factors() {
    let v = json(&[
        "biset", "decompose", "--left", "elementary_abelian:2,2", "--right", "elementary_abelian:2,1",
        "--pair", r#"{"members":[0,3,5,6],"values":[0,1,1,0]}"#,
    ]);
    let kinds: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["Ind", "Tw", "Inf", "Iso", "Def", "Tw", "Res"]);
}

#[test]
fn ebar_and_deflation_commands() {
    let c3 = json(&["biset", "ebar", "--preset", "cyclic:3,1"]);
    let dim = c3["rows"].as_array().unwrap().iter().find(|r| r["property"] == "dimension").unwrap()["value"].clone();
    assert_eq!(dim, 6);
    let d = json(&["lattice", "deflation", "--preset", "elementary_abelian:2,2", "--element", "0"]);
    let rows = d["rows"].as_array().unwrap();
    assert!(rows.iter().filter(|r| r["normal_order"] == 2).all(|r| r["m"] == "-1/2"));
}

#[test]
fn output_formats() {
    let args = ["ring", "pairs", "--preset", "cyclic:2,1"];
    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("index,order,trivial_character,pair"));
    let tex = run(&[&args[..], &["--format", "latex"]].concat());
    let text = String::from_utf8(tex.stdout).unwrap();
    assert!(text.contains("$[\\{0,1\\},(0,1)]_{\\mathrm{C2}}$"));
}

#[test]
fn oracle_on_groups_of_order_two() {
    let v = json(&["oracle", "verify", "--p", "2", "--n", "1", "--max-order", "2"]);
    let rows = v["rows"].as_array().unwrap();
    let get = |k: &str| rows.iter().find(|r| r["property"] == k).unwrap()["value"].clone();
    assert_eq!(get("mackey_mismatches"), 0);
    assert_eq!(get("dot_mismatches"), 0);
    assert!(get("mackey_checked").as_u64().unwrap() > 0);
}

#[test]
fn check_all_passes_and_is_deterministic() {
    let a = run(&["check", "all", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let b = run(&["check", "all", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn seeded_suite_is_reproducible_across_seeds() {
    for seed in ["1", "7"] {
        let a = run(&["check", "structural", "--seed", seed]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, run(&["check", "structural", "--seed", seed]).stdout);
    }
}
