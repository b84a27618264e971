use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voting-power"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).expect("valid json")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|s| s.as_str().expect("string").to_string())
        .collect()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("voting-power-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn index_both_kinds() {
    let v = json(&[
        "index",
        "--weights",
        "2,1,1",
        "--quota",
        "3",
        "--mode",
        "ge",
        "--kind",
        "both",
    ]);
    assert_eq!(strings(&v["banzhaf"]), ["3/5", "1/5", "1/5"]);
    assert_eq!(strings(&v["shapley_shubik"]), ["2/3", "1/6", "1/6"]);
}

#[test]
fn index_uniform() {
    let v = json(&[
        "index",
        "--weights",
        "1,1,1,1",
        "--quota",
        "3",
        "--mode",
        "ge",
    ]);
    assert_eq!(strings(&v["banzhaf"]), ["1/4"; 4]);
    assert_eq!(strings(&v["shapley_shubik"]), ["1/4"; 4]);
}

#[test]
fn index_engines_agree() {
    let base = [
        "index",
        "--weights",
        "5,4,3,2,1,1/2",
        "--quota",
        "15/2",
        "--mode",
        "gt",
    ];
    let outputs: Vec<Value> = ["enum", "dp", "auto"]
        .iter()
        .map(|e| {
            let mut args = base.to_vec();
            args.extend(["--engine", e]);
            json(&args)
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn index_normalize_keeps_indices() {
    let plain = json(&[
        "index",
        "--weights",
        "2,1,1",
        "--quota",
        "3/2",
        "--mode",
        "gt",
    ]);
    let scaled = json(&[
        "index",
        "--weights",
        "2,1,1",
        "--quota",
        "3/8",
        "--mode",
        "gt",
        "--normalize",
    ]);
    assert_eq!(strings(&scaled["system"]["weights"]), ["1/2", "1/4", "1/4"]);
    assert_eq!(plain["banzhaf"], scaled["banzhaf"]);
    assert_eq!(plain["shapley_shubik"], scaled["shapley_shubik"]);
}

#[test]
fn index_csv() {
    let out = stdout(&[
        "index",
        "--weights",
        "2,1,1",
        "--quota",
        "3",
        "--kind",
        "ss",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        [
            "player,weight,shapley_shubik",
            "1,2,2/3",
            "2,1,1/6",
            "3,1,1/6"
        ]
    );
}

#[test]
fn index_json_round_trip() {
    for kind in ["both", "banzhaf", "ss"] {
        let first = stdout(&[
            "index",
            "--weights",
            "3,2,2,1/3",
            "--quota",
            "4",
            "--mode",
            "ge",
            "--kind",
            kind,
            "--format",
            "json",
        ]);
        let path = scratch(&format!("index-{kind}.json"), &first);
        let second = stdout(&[
            "index",
            "--from-json",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert_eq!(first, second, "kind {kind}");
    }
}

#[test]
fn enumeration_cap_override() {
    let args = [
        "index",
        "--weights",
        "1,1,1,1,1",
        "--quota",
        "3",
        "--engine",
        "enum",
    ];
    assert_eq!(code(&args), 0);
    let mut capped = args.to_vec();
    capped.extend(["--max-players", "4"]);
    assert_eq!(code(&capped), 2);
    // auto falls back to the DP engine instead
    assert_eq!(
        code(&[
            "index",
            "--weights",
            "1,1,1,1,1",
            "--quota",
            "3",
            "--engine",
            "auto",
            "--max-players",
            "4"
        ]),
        0
    );
}

#[test]
fn exit_codes() {
    // 2: usage and parse errors
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["index", "--weights", "1,x", "--quota", "1"]), 2);
    assert_eq!(code(&["index", "--weights", "1,2", "--quota", "1/0"]), 2);
    assert_eq!(code(&["index", "--weights", "1,-2", "--quota", "1"]), 2);
    assert_eq!(code(&["index", "--weights", "1,2", "--quota", "0"]), 2);
    assert_eq!(
        code(&["index", "--weights", "1,2", "--quota", "1", "--mode", "eq"]),
        2
    );
    assert_eq!(
        code(&[
            "index",
            "--weights",
            "1,2",
            "--quota",
            "1",
            "--engine",
            "mc"
        ]),
        2
    );
    assert_eq!(code(&["divisor", "1"]), 2);
    assert_eq!(code(&["divisor", "0"]), 2);
    assert_eq!(code(&["fixedpoint", "--weights", "0,0"]), 2);
    assert_eq!(code(&["fixedpoint", "--weights", "1/2,1/4"]), 2);
    assert_eq!(code(&["family", "ab", "--k", "1", "--C", "1"]), 2);
    assert_eq!(code(&["family", "aab", "--m", "4"]), 2);
    assert_eq!(code(&["verify", "nonsense"]), 2);
    assert_eq!(
        code(&["verify", "prop24", "--n", "12", "--p", "7", "--m", "37"]),
        2
    );
    // 3: degenerate systems
    assert_eq!(
        code(&["index", "--weights", "1", "--quota", "2", "--mode", "ge"]),
        3
    );
    assert_eq!(code(&["index", "--weights", "0,0", "--quota", "1"]), 3);
    assert_eq!(
        code(&[
            "index",
            "--weights",
            "1,1",
            "--quota",
            "1",
            "--mode",
            "gt",
            "--kind",
            "ss"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "index",
            "--weights",
            "1,1",
            "--quota",
            "2",
            "--mode",
            "gt",
            "--kind",
            "ss"
        ]),
        3
    );
    // 1: a requested check fails
    assert_eq!(
        code(&["family", "ab", "--k", "4", "--C", "2", "--banzhaf-check"]),
        1
    );
    assert_eq!(
        code(&["family", "ab", "--k", "3", "--C", "2", "--banzhaf-check"]),
        1
    );
    assert_eq!(
        code(&["family", "ab", "--m", "3", "--b", "1/5", "--banzhaf-check"]),
        1
    );
    // 0
    assert_eq!(
        code(&["family", "ab", "--k", "3", "--C", "1", "--banzhaf-check"]),
        0
    );
}

#[test]
fn divisor_disagreement_witness() {
    let out = stdout(&["divisor", "6", "--prop21"]);
    assert!(out.contains("differ at divisors 6"), "{out}");
    let v = json(&["divisor", "6", "--prop21"]);
    assert!(v["witness_divisors"]
        .as_array()
        .unwrap()
        .contains(&Value::from(6)));
    assert_eq!(v["class"], "perfect");
    assert_eq!(v["quota"], "13/2");
}

#[test]
fn divisor_formulas() {
    let out = stdout(&["divisor", "20", "--formulas"]);
    assert!(
        out.lines()
            .any(|l| l.starts_with("B(1)") && l.contains("1/42") && l.contains("agrees")),
        "{out}"
    );
    let v = json(&["divisor", "20", "--formulas"]);
    let check = v["formula_checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["kind"] == "banzhaf" && c["divisor"] == 1)
        .expect("B(1) prediction")
        .clone();
    assert_eq!(check["predicted"], "1/42");
    assert_eq!(check["matches"], true);
}

#[test]
fn divisor_csv_row() {
    let out = stdout(&["divisor", "6", "--format", "csv"]);
    assert_eq!(
        out.lines().collect::<Vec<_>>(),
        [
            "n,d,sigma,k,banzhaf_vector,ss_vector,witness_positions,formula_match",
            "6,4,12,0,7/10;1/10;1/10;1/10,3/4;1/12;1/12;1/12,0;1;2;3,Y",
        ]
    );
}

#[test]
fn scan_lists_abundant_numbers() {
    let out = stdout(&["scan", "--limit", "30", "--format", "csv"]);
    let ns: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ns, ["6", "12", "18", "20", "28"]);
    let none = stdout(&[
        "scan",
        "--limit",
        "1000",
        "--quasiperfect",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&none).unwrap();
    assert_eq!(v["quasiperfect"], Value::Array(vec![]));
}

#[test]
fn fixedpoint_trace() {
    let v = json(&["fixedpoint", "--weights", "1/2,1/4,1/4", "--kind", "ss"]);
    let states: Vec<Vec<String>> = v["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(strings)
        .collect();
    assert_eq!(states.len(), 3);
    assert_eq!(states[2], ["1", "0", "0"]);
    assert_eq!(v["outcome"]["type"], "fixed");
}

#[test]
fn fixedpoint_uniform_is_immediate() {
    let v = json(&[
        "fixedpoint",
        "--weights",
        "1/3,1/3,1/3",
        "--kind",
        "banzhaf",
    ]);
    assert_eq!(v["states"].as_array().unwrap().len(), 1);
    assert_eq!(v["outcome"]["type"], "fixed");
    assert_eq!(v["outcome"]["state"], 0);
}

#[test]
fn fixedpoint_normalize_and_round_trip() {
    let first = stdout(&[
        "fixedpoint",
        "--weights",
        "2,1,1",
        "--normalize",
        "--format",
        "json",
    ]);
    let direct = stdout(&["fixedpoint", "--weights", "1/2,1/4,1/4", "--format", "json"]);
    assert_eq!(first, direct);
    let path = scratch("trace.json", &first);
    let again = stdout(&[
        "fixedpoint",
        "--from-json",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(first, again);
}

#[test]
fn family_joint_point() {
    let out = stdout(&["family", "ab", "--k", "3", "--C", "1", "--banzhaf-check"]);
    assert!(out.contains("(1/3, 2/15 x 5)"), "{out}");
    assert!(out.contains("ss-fixed: yes"), "{out}");
    assert!(out.contains("banzhaf-fixed: yes"), "{out}");
}

#[test]
fn family_aab_solve() {
    let out = stdout(&["family", "aab", "--m", "8", "--solve"]);
    assert!(out.contains("{13/180, 4/45, 1/9}"), "{out}");
    let v = json(&["family", "aab", "--m", "9", "--solve"]);
    assert_eq!(strings(&v["solutions"]), ["5/99", "31/495", "37/495"]);
}

#[test]
fn family_invalid_point() {
    let out = stdout(&["family", "ab", "--k", "2", "--C", "1"]);
    assert!(out.contains("1/(2b) integer"), "{out}");
    let v = json(&["family", "ab", "--k", "2", "--C", "1"]);
    assert_eq!(v["point"]["valid"], false);
}

#[test]
fn family_explicit_points() {
    let v = json(&["family", "aab", "--m", "3", "--b", "2/15"]);
    assert_eq!(v["ss_power_of_a"], "3/10");
    assert_eq!(v["ss_fixed"], true);
    let v = json(&["family", "ab", "--m", "5", "--b", "2/15"]);
    assert_eq!(v["ss_fixed"], true);
    let v = json(&["family", "ab", "--m", "5", "--solve"]);
    assert!(strings(&v["solutions"]).contains(&"2/15".to_string()));
}

#[test]
fn verify_tables() {
    let out = stdout(&["verify", "tables32"]);
    let certified = out
        .lines()
        .filter(|l| l.starts_with("PASS") && l.contains("engine fixed point"))
        .count();
    // 11 values for even m, 8 for odd m
    assert_eq!(certified, 19, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_pn_mn() {
    let out = stdout(&["verify", "prop24", "--n", "12", "--p", "31", "--m", "37"]);
    assert!(out.contains("2046 vs 2046"), "{out}");
}

#[test]
fn verify_all_bounded() {
    let out = stdout(&["verify", "all", "--max-n", "300"]);
    assert!(out.contains(" 0 failed"), "{out}");
    for suite in [
        "prop21",
        "prop22census",
        "prop24",
        "conj23",
        "tables32",
        "sec33",
    ] {
        assert!(out.contains(&format!("== {suite}:")), "missing {suite}");
    }
    // findings are reported without failing the run
    assert!(out.contains("FINDING (contradicted)"));
}

#[test]
fn verify_json_and_csv() {
    let v = json(&["verify", "erratum"]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let csv = stdout(&["verify", "prop22census", "--format", "csv"]);
    assert!(csv.starts_with("suite,check,status,detail"));
    assert!(
        csv.contains("\"abundant with 6 divisors: [12, 18, 20]\""),
        "{csv}"
    );
}
