//! The built-in example suite behind `--corpus`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};

use logdiv::divisor::{classify, ClassificationReport, DivisorInput};

use crate::report::{Outcome, Report};

pub struct Expected {
    pub name: &'static str,
    pub f: &'static str,
    pub free: bool,
    pub koszul: bool,
    pub ljt: bool,
    pub theta_koszul: bool,
}

pub const CORPUS: &[Expected] = &[
    Expected { name: "smooth", f: "x", free: true, koszul: true, ljt: true, theta_koszul: true },
    Expected { name: "normal crossing", f: "x*y", free: true, koszul: true, ljt: true, theta_koszul: true },
    Expected { name: "cusp", f: "x^2 - y^3", free: true, koszul: true, ljt: true, theta_koszul: true },
    Expected {
        name: "non-Koszul free quartic",
        f: "x1*x2*(x1+x2)*(x1+x2*x3)",
        free: true,
        koszul: false,
        ljt: false,
        theta_koszul: true,
    },
];

fn flag(f: &Option<logdiv::divisor::Flag<bool>>) -> Option<bool> {
    f.as_ref().map(|x| x.value)
}

/// Violations of the implications every classification must satisfy.
pub fn implication_violations(r: &ClassificationReport) -> Vec<&'static str> {
    let qh = r.quasi_homogeneous.value.is_some();
    let ljt = flag(&r.linear_jacobian_type) == Some(true);
    let mut out = Vec::new();
    if qh && r.free.value && !ljt {
        out.push("quasi-homogeneous and free but not of linear jacobian type");
    }
    if ljt && flag(&r.koszul_free) != Some(true) {
        out.push("linear jacobian type but not Koszul free");
    }
    if ljt && !r.euler_homogeneous.value {
        out.push("linear jacobian type but not Euler homogeneous");
    }
    out
}

fn entry(e: &Expected) -> Result<(Value, bool), Outcome> {
    let r = classify(&DivisorInput::parse(e.f, None)?)?;
    let got = json!({
        "free": r.free.value,
        "koszul_free": flag(&r.koszul_free),
        "linear_jacobian_type": flag(&r.linear_jacobian_type),
        "theta_koszul_pair": flag(&r.theta_koszul_pair),
        "euler_homogeneous": r.euler_homogeneous.value,
        "quasi_homogeneous": r.quasi_homogeneous.value,
    });
    let expected = json!({
        "free": e.free,
        "koszul_free": e.koszul,
        "linear_jacobian_type": e.ljt,
        "theta_koszul_pair": e.theta_koszul,
    });
    let matches = ["free", "koszul_free", "linear_jacobian_type", "theta_koszul_pair"]
        .iter()
        .all(|k| got[k] == expected[k]);
    let violations = implication_violations(&r);
    let ok = matches && violations.is_empty();
    let v = json!({
        "name": e.name,
        "f": e.f,
        "computed": got,
        "expected": expected,
        "matches": matches,
        "implication_violations": violations,
    });
    Ok((v, ok))
}

pub fn run(jobs: usize) -> Report {
    let results: Mutex<Vec<Option<Result<(Value, bool), Outcome>>>> = Mutex::new(vec![None; CORPUS.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(CORPUS.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= CORPUS.len() {
                    break;
                }
                let r = entry(&CORPUS[i]);
                results.lock().expect("no poisoned lock")[i] = Some(r);
            });
        }
    });
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for (e, r) in CORPUS.iter().zip(results.into_inner().expect("no poisoned lock")) {
        match r.expect("every job ran") {
            Ok((v, ok)) => {
                if !ok {
                    failed.push(e.name);
                }
                entries.push(v);
            }
            Err(err) => return Report::error("corpus", json!({ "corpus": "builtin" }), err),
        }
    }
    let result = json!({ "entries": entries, "passed": failed.is_empty() });
    let input = json!({ "corpus": "builtin" });
    if failed.is_empty() {
        Report::ok("corpus", input, result)
    } else {
        Report::failed("corpus", input, result, format!("table mismatch for {}", failed.join(", ")))
    }
}
