use std::path::Path;
use std::process::Command;

use serde_json::Value;
use sha2::{Digest, Sha256};

const QUARTIC: &str = "x1*x2*(x1+x2)*(x1+x2*x3)";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn logdiv(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_logdiv")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn report(args: &[&str]) -> (i32, Value) {
    let r = logdiv(args);
    let v: Value = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}\n{}", r.stdout, r.stderr));
    assert_eq!(v["schema"], "logdiv-report/1");
    (r.code, v)
}

fn result(v: &Value) -> &Value {
    &v["body"]["result"]
}

#[test]
fn classify_normal_crossing() {
    let (code, v) = report(&["classify", "x*y"]);
    assert_eq!(code, 0);
    let r = result(&v);
    for key in ["free", "koszul_free", "linear_jacobian_type"] {
        assert_eq!(r[key]["value"], true, "{key}");
    }
}

#[test]
fn classify_quartic() {
    let (code, v) = report(&["classify", QUARTIC]);
    assert_eq!(code, 0);
    let r = result(&v);
    assert_eq!(r["free"]["value"], true);
    assert_eq!(r["koszul_free"]["value"], false);
    assert_eq!(r["linear_jacobian_type"]["value"], false);
    assert_eq!(r["theta_koszul_pair"]["value"], true);
}

#[test]
fn bfunction_of_cusp() {
    let (code, v) = report(&["bfunction", "x^2-y^3"]);
    assert_eq!(code, 0);
    let r = result(&v);
    let mut roots: Vec<&str> = r["roots"].as_array().unwrap().iter().map(|x| x["root"].as_str().unwrap()).collect();
    roots.sort();
    assert_eq!(roots, ["-1", "-5/6", "-7/6"]);
    assert_eq!(r["threshold"]["k0"], 1);
    assert_eq!(r["certificate"]["verified"], true);
    assert_eq!(r["exact"], true);
}

#[test]
fn twisted_bfunction_shifts_threshold() {
    let (code, v) = report(&["bfunction", "x*y", "--twist", "-2"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v)["threshold"]["k0"], 1);
    assert_eq!(result(&v)["twisted"]["bfunction"]["threshold"]["k0"], 3);
}

#[test]
fn exit_codes() {
    let bad = report(&["classify", "x^-1"]);
    assert_eq!(bad.0, 1);
    assert_eq!(bad.1["body"]["status"], "input_error");
    assert!(bad.1["body"]["error"].as_str().unwrap().contains("1:3"));

    assert_eq!(logdiv(&["classify", "x*y", "--frobnicate"]).code, 1);
    assert_eq!(report(&["classify", "x*y", "--twist", "1"]).0, 1);
    assert_eq!(report(&["classify", "x*z", "--vars", "x,y"]).0, 1);
    assert_eq!(report(&["classify", "x^2 - y^3", "--weights", "1,1"]).0, 1);
    assert_eq!(report(&["classify", "1 + x"]).0, 1);
    assert_eq!(logdiv(&["classify"]).code, 1);
    assert_eq!(logdiv(&[]).code, 1);

    let not_free = report(&["bfunction", "x*y*z*(x+y+z)"]);
    assert_eq!(not_free.0, 2);
    assert_eq!(not_free.1["body"]["status"], "inconclusive");
    assert_eq!(report(&["bfunction", "x^2-y^3", "--degree-cap", "1"]).0, 2);
    assert_eq!(report(&["classify", "x*y*z*(x+y+z)"]).0, 0);

    assert_eq!(logdiv(&["--help"]).code, 0);
}

#[test]
fn reports_are_deterministic() {
    let a = logdiv(&["classify", "x^2 - y^3"]).stdout;
    let b = logdiv(&["classify", "x^2 - y^3"]).stdout;
    assert_eq!(a, b);
    let (_, v) = report(&["classify", "x^2 - y^3"]);
    let compact = serde_json::to_string(&v["body"]).unwrap();
    assert_eq!(v["body_sha256"], format!("{:x}", Sha256::digest(compact.as_bytes())));
}

#[test]
fn timing_stays_outside_the_hash() {
    let (_, plain) = report(&["logder", "x*y"]);
    let (_, timed) = report(&["logder", "x*y", "--timing"]);
    assert!(plain.get("timing").is_none());
    assert!(timed["timing"]["total_seconds"].is_number());
    assert_eq!(plain["body_sha256"], timed["body_sha256"]);
}

#[test]
fn json_output_and_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.txt");
    std::fs::write(&input, "x^2 - y^3\n").unwrap();
    let out = dir.path().join("r.json");
    let r = logdiv(&["theta", "--file", input.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("theta: ok"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(result(&v)["annihilate_f_s"], true);
    assert_eq!(result(&v)["symbols_regular"], true);
    assert_eq!(result(&v)["operators"].as_array().unwrap().len(), 2);
}

#[test]
fn rees_kernel_of_normal_crossing() {
    let (code, v) = report(&["rees-kernel", "x*y"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v)["linear_jacobian_type"], true);
    assert_eq!(result(&v)["fibre_homogeneous"], true);
}

#[test]
fn corpus_mode() {
    let (code, v) = report(&["--corpus", "--jobs", "3"]);
    assert_eq!(code, 0);
    let r = result(&v);
    assert_eq!(r["passed"], true);
    let entries = r["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().all(|e| e["implication_violations"].as_array().unwrap().is_empty()));
    let (_, serial) = report(&["--corpus"]);
    assert_eq!(serial["body_sha256"], v["body_sha256"]);
}

#[test]
fn spencer_verify_graded() {
    let (code, v) = report(&["spencer-verify", "x^2 - y^3", "--twist", "1", "--trunc-weight", "4"]);
    assert_eq!(code, 0, "{v}");
    let r = result(&v);
    assert_eq!(r["truncation"]["mode"], "graded");
    assert_eq!(r["exact_below_zero"], true);
    let rows = r["specialization"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["k"], 0);
    assert!(rows.iter().all(|x| x["all_equal"] == true));
}

#[test]
fn spencer_verify_filtration_is_labelled() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("complex.txt");
    let (code, v) = report(&["spencer-verify", QUARTIC, "--trunc-order", "1", "--x-degree", "1", "--export", export.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    let r = result(&v);
    assert_eq!(r["truncation"]["mode"], "filtration");
    assert!(r["truncation"]["label"].as_str().unwrap().starts_with("evidence"));
    assert!(r.get("homology").is_none());
    assert!(std::fs::read_to_string(&export).unwrap().starts_with("logdiv-spencer 1\n"));
    assert_eq!(report(&["spencer-verify", QUARTIC, "--trunc-weight", "3"]).0, 1);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn ilc_check_and_connections() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.json", r#"{"rank": 1, "matrices": [[["0"]], [["0"]]]}"#);
    let bent = write(dir.path(), "bent.json", r#"{"rank": 1, "matrices": [[["x"]], [["x"]]]}"#);
    let short = write(dir.path(), "short.json", r#"{"rank": 1, "matrices": [[["0"]]]}"#);

    let (code, v) = report(&["ilc-check", "x*y", "--ilc", &flat]);
    assert_eq!(code, 0);
    assert_eq!(result(&v)["integrable"], true);
    assert_eq!(result(&v)["line_bundle_degree"], 0);

    let (code, v) = report(&["ilc-check", "x*y", "--ilc", &bent]);
    assert_eq!(code, 0);
    assert_eq!(result(&v)["integrable"], false);

    assert_eq!(report(&["ilc-check", "x*y", "--ilc", &short]).0, 1);
    assert_eq!(report(&["ilc-check", "x*y"]).0, 1);
    assert_eq!(report(&["spencer-verify", "x*y", "--ilc", &bent]).0, 1);

    let (code, v) = report(&["spencer-verify", "x*y", "--ilc", &flat, "--trunc-weight", "3"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v)["exact_below_zero"], true);
}

#[test]
fn both_pairs_agree_in_the_report() {
    let (_, a) = report(&["spencer-verify", "x*y", "--trunc-weight", "2", "--pair", "theta"]);
    let (_, b) = report(&["spencer-verify", "x*y", "--trunc-weight", "2", "--pair", "logder"]);
    assert_eq!(result(&a)["homology"], result(&b)["homology"]);
    assert_ne!(result(&a)["pair"], result(&b)["pair"]);
}
