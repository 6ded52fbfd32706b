use std::process::{Command, Output};

fn m0n(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_m0n")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_2018_matches_golden_file_byte_for_byte() {
    let o = m0n(&["classify", "2018"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), include_str!("data/classify_2018.txt"));
}

#[test]
fn classify_is_stable_across_runs() {
    assert_eq!(stdout(&m0n(&["classify", "360"])), stdout(&m0n(&["classify", "360"])));
}

#[test]
fn small_n_listing_and_warning() {
    let o = m0n(&["classify", "2"]);
    assert_eq!(stdout(&o), "infinity\n");
    let o = m0n(&["classify", "4"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 5"));
    assert_eq!(m0n(&["classify", "0"]).status.code(), Some(2));
    assert_eq!(m0n(&["classify", "x"]).status.code(), Some(2));
}

#[test]
fn witness_outputs() {
    let o = m0n(&["witness", "5", "--entry", "(0)"]);
    assert!(o.status.success());
    let got: Vec<m0n::RiemannPoint> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    let expected: Vec<m0n::RiemannPoint> = ["1", "1i", "-1", "-1i", "2"].iter().map(|s| s.parse().unwrap()).collect();
    let got = m0n::PointSet::new(got, 1e-8).unwrap();
    assert!(got.set_equal(&m0n::PointSet::new(expected, 1e-8).unwrap()).unwrap());
    assert_eq!(m0n(&["witness", "5", "--entry", "A_5,(1,0,0,0)"]).status.code(), Some(3));
}

#[test]
fn witness_json_and_out_file() {
    let dir = std::env::temp_dir().join(format!("m0n-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    let o = m0n(&["--json", "--out", path.to_str().unwrap(), "witness", "7", "--entry", "D_5, (1, 1, 0)"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["entry"], serde_json::json!({"group": "D", "p": 5, "index": [1, 1, 0]}));
    assert_eq!(v["points"].as_array().unwrap().len(), 7);
    assert_eq!(v["order"], 10);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_and_moduli_commands() {
    let o = m0n(&["verify", "5", "12"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failed\n"));
    let o = m0n(&["moduli", "6", "--group-law", "--trials", "200"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = m0n(&["moduli", "5", "--phi", "--preset", "z2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["phi"]["g_lambda_order"], 2);
    assert_eq!(v["passed"], true);
}
