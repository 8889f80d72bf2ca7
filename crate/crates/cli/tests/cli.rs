use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata-glue")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn orbit_counts() {
    let o = run(&["orbits", "--p", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("level 2: 4 orbits"));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let v = json(&["orbits", "--p", "2", "--k", "2"]);
    assert_eq!(v["report"]["formula"], 6);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["orbits", "--p", "4", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--n", "3", "--p", "2"]).status.code(), Some(2));
    assert_eq!(run(&["sl2coh", "--rep", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sl2coh", "--rep", "st", "--level", "3", "--precision", "2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let o = run(&["verify-all", "--n", "3", "--p", "2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("banality"));
}

#[test]
fn sl2_cohomology_examples() {
    assert_eq!(stdout(&run(&["sl2coh", "--rep", "st", "--p", "3", "--n", "5"])), "H0 = 0\nH1 = Z/5\n");
    assert_eq!(stdout(&run(&["sl2coh", "--rep", "triv"])), "H0 = Z/11\nH1 = 0\n");
    let v = json(&["sl2coh", "--rep", "ps(0,0)", "--p", "3", "--n", "11", "--sqrt-q", "5"]);
    assert_eq!(v["cohomology"]["H0"], serde_json::json!([]));
    assert_eq!(v["cohomology"]["H1"], serde_json::json!([]));
}

#[test]
fn glue_examples() {
    assert_eq!(stdout(&run(&["glue", "--slope", "int", "--rep", "triv"])), "degree 0: 1⊗1\ndegree 3: δ_T\n");
    assert_eq!(stdout(&run(&["glue", "--slope", "half", "--rep", "nrd^0"])), "degree 0: 1⊗1\ndegree 1: δ_T\n");
    assert_eq!(stdout(&run(&["glue", "--rep", "ps(0,2)"])), "0\n");
    let t = stdout(&run(&["glue", "--rep", "ps(5,5)"]));
    assert!(t.starts_with("degree 1:") && t.contains("degree 2:"));
}

#[test]
fn text_and_json_agree() {
    let v = json(&["glue", "--rep", "absdet^1"]);
    let degrees: Vec<&String> = v["result"]["degrees"].as_object().unwrap().keys().collect();
    assert_eq!(degrees, ["0", "3"]);
    let text = stdout(&run(&["glue", "--rep", "absdet^1"]));
    for d in degrees {
        assert!(text.contains(&format!("degree {d}:")));
    }
    let ranks = json(&["ranks", "--p", "3", "--k", "1", "--window", "1"]);
    assert_eq!(ranks["ranks"]["2"], 6);
    assert!(stdout(&run(&["ranks"])).contains("degree 3: rank 8"));
}

#[test]
fn jacquet_agrees_with_symbol() {
    let v = json(&["jacquet", "--rep", "st"]);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["agree"], true);
}

#[test]
fn verify_all_passes() {
    let o = Command::new(env!("CARGO_BIN_EXE_strata-glue"))
        .args(["verify-all", "--format", "json"])
        .env("STRATA_GLUE_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);
}

#[test]
fn help_documents_the_grammar() {
    let h = stdout(&run(&["--help"]));
    assert!(h.contains("ps(a,b)") && h.contains("cusp:<path>"));
}
