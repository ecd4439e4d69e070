use std::process::{Command, Output};

use serde_json::Value;

fn syzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn green_json_passes() {
    let o = syzlab(&["green", "F2", "--cliff", "1", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exit_status"], 0);
    assert_eq!(v["fixture"], "F2");
    assert_eq!(v["verdicts"][0]["status"], "pass");
    assert_eq!(v["verdicts"][0]["claim"], "green");
}

#[test]
fn wrong_clifford_fails_with_verdict_code() {
    let o = syzlab(&["green", "F3", "--cliff", "1", "--json", "-"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exit_status"], 2);
    assert_eq!(v["verdicts"][0]["status"], "fail");
    assert_eq!(syzlab(&["green", "F3", "--cliff", "2"]).status.code(), Some(0));
}

#[test]
fn audit_case_iv() {
    let o = syzlab(&["audit", "--k", "3", "--case", "iv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("inadmissible"));
    let o = syzlab(&["audit", "--k", "3", "--case", "i", "--deg-fe", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("inadmissible"));
}

#[test]
fn budget_refusal_reports_shape() {
    let o = syzlab(&["analyze", "F7", "--pq", "5,1", "--budget", "1000", "--budget-exceeded-policy", "refuse"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("9900 x 5082"), "{err}");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(syzlab(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(syzlab(&["analyze", "F99"]).status.code(), Some(64));
    assert_eq!(syzlab(&["analyze", "F2", "--pq", "3"]).status.code(), Some(64));
    assert_eq!(syzlab(&["audit", "--k", "3", "--case", "v"]).status.code(), Some(64));
    assert_eq!(syzlab(&["green", "F2", "--primes", "10007,31513"]).status.code(), Some(64));
    assert_eq!(syzlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn fixtures_roster_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = syzlab(&["fixtures", "--save", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    // a saved file works wherever a fixture name does
    let f3 = dir.path().join("F3.fixture");
    let by_file = syzlab(&["analyze", f3.to_str().unwrap(), "--pq", "2,1", "--json", "-", "--no-timings"]);
    let by_name = syzlab(&["analyze", "F3", "--pq", "2,1", "--json", "-", "--no-timings"]);
    let a: Value = serde_json::from_str(&stdout(&by_file)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&by_name)).unwrap();
    assert_eq!(a["cells"], b["cells"]);
    assert_eq!(a["cells"][0]["dim"], 0);
}

#[test]
fn analyze_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f2.csv");
    let o = syzlab(&["analyze", "F2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("p,q,dim\n"));
    assert!(text.lines().any(|l| l == "1,1,3"));
    assert!(text.lines().any(|l| l == "2,1,2"));
    assert!(text.lines().any(|l| l == "1,2,2"));
}

#[test]
fn consensus_across_primes() {
    let o = syzlab(&["analyze", "F3", "--pq", "1,1", "--pq", "2,1", "--primes", "10007,31513,65521", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cells = v["consensus"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert!(cells.iter().all(|c| c["stable"] == true));
    assert_eq!(cells[0]["consensus"], 3);
    assert_eq!(cells[1]["consensus"], 0);
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for t in ["1", "4"] {
        let path = dir.path().join(format!("t{t}.json"));
        let o = syzlab(&["analyze", "F4", "--threads", t, "--seed", "7", "--no-timings", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v["command"] = Value::Null;
        texts.push(v.to_string());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn gonality_and_glue() {
    let o = syzlab(&["gonality", "F3", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["details"]["lo"], 4);
    assert_eq!(v["details"]["hi"], 4);

    let o = syzlab(&["glue", "F9", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (a, b, c) = (v["details"]["a"].as_u64().unwrap(), v["details"]["b"].as_u64().unwrap(), v["details"]["c"].as_u64().unwrap());
    assert!(a <= b && b <= c);
}
