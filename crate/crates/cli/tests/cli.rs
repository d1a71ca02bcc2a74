use std::process::{Command, Output};

fn vinscheme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vinscheme"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<String> {
    stdout(o).lines().map(str::to_string).collect()
}

#[test]
fn discover_writes_scheme_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    let o = vinscheme(&["discover", "23-1", "-d", "2", "-M", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["variant"], "original");
    assert_eq!(doc["scheme"]["triples"].as_array().unwrap().len(), 4);

    let o = vinscheme(&["enumerate", "--scheme", path.to_str().unwrap(), "--n", "10"]);
    assert_eq!(lines(&o).last().unwrap(), "115975");
}

#[test]
fn no_scheme_and_reverse_fallback() {
    let o = vinscheme(&["discover", "2-3-1", "-d", "5", "-M", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("54321"));

    let o = vinscheme(&["discover", "2-3-1", "-d", "5", "-M", "2", "--try-reverse", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["variant"], "reverse");
    assert_eq!(doc["scheme"]["patterns"][0], "1-3-2");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(vinscheme(&["discover", ""]).status.code(), Some(2));
    assert_eq!(vinscheme(&["discover", "12-x"]).status.code(), Some(2));
    assert_eq!(vinscheme(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(vinscheme(&["survey", "--set-type", "4,4"]).status.code(), Some(2));
    assert_eq!(vinscheme(&["oracle-check", "12", "--n", "11"]).status.code(), Some(2));
}

#[test]
fn enumerate_sequences() {
    let o = vinscheme(&["enumerate", "143-2", "10"]);
    assert_eq!(
        lines(&o),
        ["1", "2", "6", "23", "107", "582", "3622", "25369", "197523", "1692535"]
    );
    let o = vinscheme(&["enumerate", "12-34", "10", "--json"]);
    let got: Vec<u64> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(got, [1, 2, 6, 23, 107, 585, 3669, 25932, 203768, 1761109]);
}

#[test]
fn enumerate_by_inversions() {
    let o = vinscheme(&["enumerate", "1-32", "5", "--by-inversions", "--json"]);
    let got: Vec<Vec<u64>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(got[3], [1, 1, 2, 4, 3, 3, 1]);
    assert_eq!(got[4], [1, 1, 2, 4, 7, 8, 9, 9, 6, 4, 1]);

    let o = vinscheme(&["enumerate", "2-3-1", "4", "--by-inversions", "--json"]);
    let got: Vec<Vec<u64>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(got[2], [1, 2, 1, 1]);
}

#[test]
fn oracle_check_passes_and_detects_corruption() {
    let o = vinscheme(&["oracle-check", "214-3", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(lines(&o)[7].starts_with("n=8 scheme=25548 oracle=25548"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    vinscheme(&["discover", "23-1", "-d", "2", "--out", path.to_str().unwrap()]);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["scheme"]["triples"][2]["gap_basis"] = serde_json::json!([]);
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = vinscheme(&["oracle-check", "--scheme", path.to_str().unwrap(), "--n", "6"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("first divergence at n = 3"));
}

#[test]
fn survey_reports() {
    let o = vinscheme(&["survey", "--length", "2", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["classes_total"] == r["classes_successful"]));

    let o = vinscheme(&["survey", "--set-type", "{2,3}"]);
    assert!(stdout(&o).contains("{2,3}            11     11  100.0%"));
}

#[test]
fn classify_groups() {
    let o = vinscheme(&["classify", "123-4", "132-4", "--n", "6", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["groups"].as_array().unwrap().len(), 2);
    assert_eq!(doc["witnesses"][0]["n"], 5);
    assert_eq!(doc["groups"][0]["sequence"][4], "108");

    let o = vinscheme(&["classify", "132-4", "142-3", "241-3", "--n", "12"]);
    assert!(stdout(&o).starts_with("[0] 132-4 | 142-3 | 241-3:"));
}
