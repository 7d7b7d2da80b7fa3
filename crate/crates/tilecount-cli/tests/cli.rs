use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilecount")).args(args).env_remove("TILECOUNT_CACHE_DIR").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tilecount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const BIHEX: &[&str] = &["tilings", "--tile", "bihex", "--curvatures", "2,2,1,1", "--order", "10", "--connectivity", "connected"];

#[test]
fn tilings_output_carries_metadata() {
    let out = run(BIHEX);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["meta"]["config"]["order"], 10);
    let coeffs = v["result"]["series"]["coeffs"].as_array().unwrap();
    assert_eq!(coeffs[0]["exp"], "2");
    assert_eq!(coeffs[0]["value"]["coeffs"][0], "1/2");
}

#[test]
fn reruns_are_byte_identical_and_job_files_match_flags() {
    let a = run(BIHEX);
    let b = run(BIHEX);
    assert_eq!(a.stdout, b.stdout);
    let job = scratch("job.json");
    std::fs::write(
        &job,
        r#"{"command": "tilings", "tile": "bihex", "curvatures": [2,2,1,1], "order": 4, "connectivity": "connected"}"#,
    )
    .unwrap();
    let c = run(&["--config", job.to_str().unwrap(), "tilings", "--order", "10"]);
    assert_eq!(json(&c)["meta"]["config_hash"], json(&a)["meta"]["config_hash"]);
    assert_eq!(c.stdout, a.stdout);
}

#[test]
fn fit_recovers_the_appendix_table() {
    let h = scratch("h.json");
    std::fs::write(&h, run(BIHEX).stdout).unwrap();
    let out = run(&["fit", "--N", "3", "--weight-bound", "2", "--preset", "appendix", "--series", h.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    let values: Vec<&str> =
        v["result"]["coefficients"].as_array().unwrap().iter().map(|c| c["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["1/18", "-1/6", "1/6", "1/2"]);
    assert_eq!(v["meta"]["inputs"].as_object().unwrap().len(), 1);
}

#[test]
fn unfittable_series_has_its_own_exit_code() {
    let s = scratch("bad.json");
    std::fs::write(&s, r#"["1","0","0","0","0","0","0","0","0","0","0","7"]"#).unwrap();
    let out = run(&["fit", "--N", "3", "--weight-bound", "2", "--series", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn volume_reports_normalization() {
    let out = run(&["volume", "--N", "3", "--mu", "2,2,1,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["volume"], "2/3*pi^2");
    assert_eq!(v["result"]["mechanical"], "2/9*pi^2");
    assert_eq!(v["result"]["normalization"], "3");
    assert_eq!(v["result"]["status"], "finite");
    assert_eq!(v["result"]["P"].as_array().unwrap().len(), 3);
}

#[test]
fn bracket_series_has_unit_n() {
    let e = scratch("g.json");
    std::fs::write(&e, r#"{"N": 3, "terms": [{"monomial": [[1, 1]], "coeff": {"order": 6, "coeffs": ["1", "0"]}}]}"#).unwrap();
    let out = run(&["bracket", "--N", "3", "--element", e.to_str().unwrap(), "--order", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["result"]["series"]["unit"], 3);
    let m = run(&["bracket", "--N", "3", "--monomial", "p1^1", "--order", "8"]);
    assert_eq!(json(&m)["result"]["series"], json(&out)["result"]["series"]);
}

#[test]
fn invalid_input_and_budget_exit_codes_differ() {
    let empty = run(&["tilings", "--tile", "square", "--curvatures", "", "--order", "4"]);
    assert_eq!(empty.status.code(), Some(3));
    let bad_level = run(&["hurwitz", "--N", "5", "--mu", "1"]);
    assert_eq!(bad_level.status.code(), Some(3));
    let budget = run(&["--budget", "10", "hurwitz", "--degree", "6", "--profiles", "2,1;2,2;3", "--brute-force"]);
    assert_eq!(budget.status.code(), Some(4));
    let order = run(&["--max-order", "5", "tilings", "--tile", "bihex", "--curvatures", "2,2,1,1", "--order", "6"]);
    assert_eq!(order.status.code(), Some(4));
}

#[test]
fn hurwitz_numbers_with_brute_force() {
    let out = run(&["hurwitz", "--degree", "4", "--profiles", "2,1,1;2,1,1;3,1", "--brute-force", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tilecount "));
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows[0].split(',').nth(1), rows[1].split(',').nth(1));
}

#[test]
fn triangles_print_the_experimental_banner() {
    let out = run(&["tilings", "--tile", "triangle", "--curvatures", "2,2,2,2,2,2", "--order", "3", "--connectivity", "disconnected"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("experimental"));
    assert_eq!(json(&out)["result"]["experimental"], true);
}

#[test]
fn selftest_exit_status_follows_criteria() {
    let ok = run(&["selftest", "--criteria", "3,7"]);
    assert!(ok.status.success());
    assert_eq!(json(&ok)["result"]["passed"], 2);
    let csv = run(&["selftest", "--criteria", "1", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&csv.stdout).contains("id,name,passed,detail"));
}

#[test]
fn cache_directory_reuses_results() {
    let dir = scratch("cache");
    let args = ["hurwitz", "--N", "3", "--mu", "2,1;;", "--order", "3"];
    let first = Command::new(env!("CARGO_BIN_EXE_tilecount")).args(args).env("TILECOUNT_CACHE_DIR", &dir).output().unwrap();
    assert!(first.status.success());
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    let second = Command::new(env!("CARGO_BIN_EXE_tilecount")).args(args).env("TILECOUNT_CACHE_DIR", &dir).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
}
