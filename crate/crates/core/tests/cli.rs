use std::process::{Command, Output};

use serde_json::Value;

fn qseries(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qseries"));
    cmd.args(args).env_remove("QSERIES_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("QSERIES_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn expand_prints_coefficients() {
    let out = qseries(&["expand", "--series", "X", "--prec", "8"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    assert_eq!(v["name"], "X");
    assert_eq!(v["coeffs"][0], "1");
    assert_eq!(v["coeffs"][1], "8");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 8);
}

#[test]
fn identity_passes_and_output_is_deterministic() {
    let a = qseries(&["check-identity", "even", "--prec", "400"], None);
    let b = qseries(&["check-identity", "even", "--prec", "400"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(lines(&a)[0]["passed"], true);
}

#[test]
fn congruence_smallest_instance() {
    let out = qseries(&["check-congruence", "--alpha", "1", "--count", "1", "--beta"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    assert_eq!(v["name"], "b_congruence_alpha1");
    assert_eq!(v["modulus"], "3^2");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qseries(&["expand", "--series", "nonsense", "--prec", "20"], None).status.code(), Some(2));
    assert_eq!(qseries(&["check-identity", "bilateral", "--prec", "3"], None).status.code(), Some(2));
    assert_eq!(qseries(&["check-congruence", "--alpha", "0", "--count", "3"], None).status.code(), Some(2));
    assert_eq!(qseries(&["check-congruence", "--alpha", "1", "--count", "3", "--beta", "--g"], None).status.code(), Some(2));
}

#[test]
fn matrices_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let out = qseries(&["build-matrices", "--which", "a", "--rows", "5", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let row1 = &m["rows"][0];
    assert_eq!((row1["lo"].as_i64(), row1["hi"].as_i64()), (Some(1), Some(3)));
    assert_eq!(row1["entries"], serde_json::json!(["10", "-36", "27"]));
    assert_eq!(m["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn valuations_small() {
    let out = qseries(&["check-valuations", "--rows", "15", "--alphas", "3"], None);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<_> = lines(&out).iter().map(|v| v["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["bound_a", "bound_b", "bound_t", "bound_d"]);
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let first = qseries(&["expand", "--series", "beta", "--prec", "60"], Some(dir.path()));
    assert_eq!(lines(&first)[0]["cache"], "computed");
    let second = qseries(&["expand", "--series", "beta", "--prec", "50"], Some(dir.path()));
    let (a, b) = (&lines(&first)[0], &lines(&second)[0]);
    assert_eq!(b["cache"], "hit");
    assert_eq!(a["coeffs"].as_array().unwrap()[..50], b["coeffs"].as_array().unwrap()[..]);

    std::fs::write(dir.path().join("beta.json"), "[]").unwrap();
    let bad = qseries(&["expand", "--series", "beta", "--prec", "50"], Some(dir.path()));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn check_all_quick() {
    let out = qseries(&["--timings", "check-all", "--quick"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let reports = lines(&out);
    assert!(reports.iter().all(|v| v["passed"] == true && v.get("duration_ms").is_some()));
    let names: Vec<_> = reports.iter().map(|v| v["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}
