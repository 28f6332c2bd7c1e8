//! One function per subcommand; each returns the `result` object of the body.

use std::time::Duration;

use serde_json::{json, Value};

use logdiv::cas::poly::fmt_rational;
use logdiv::cas::{Deadline, GbConfig, Selection};
use logdiv::divisor::{
    check_weights, classify_with, is_fibre_homogeneous, is_linear_jacobian_type_with, is_quasi_homogeneous,
    log_derivations_with, rees_kernel_with, saito_basis, theta_generators, theta_symbols_regular, ClassifyOptions,
    DivisorInput, SaitoBasis, SymbolRing,
};
use logdiv::ilc::{bfunction_of_connection, check_integrability, structure_functions, ILCData};
use logdiv::spencer::{
    build_spencer, check_exactness, filtration_evidence, homogeneous_saito_basis, specialize_and_check, Pair,
    SpencerSpec, Truncation,
};
use logdiv::weyl::{
    act_on_fs, bfunction_via_theta_with, lct_threshold, verify_functional_equation, BFunction, BFunctionOptions,
    FsElement, Threshold, WeylOp, WeylRing,
};

use crate::report::{Outcome, Report};
use crate::{Opts, PairArg};

pub const DEFAULT_WEIGHT: i64 = 6;
pub const DEFAULT_ORDER: u32 = 3;
pub const DEFAULT_BOX_ORDER: u32 = 2;
pub const DEFAULT_X_DEGREE: u32 = 2;

/// Flags a command accepts besides the expression, --vars, --json and --timing.
fn accepted(cmd: &str) -> &'static [&'static str] {
    match cmd {
        "classify" | "logder" | "theta" | "rees-kernel" => &["weights", "degree-cap", "deadline"],
        "bfunction" => &["weights", "degree-cap", "deadline", "twist"],
        "ilc-check" => &["weights", "degree-cap", "deadline", "ilc"],
        "spencer-verify" => &[
            "weights",
            "degree-cap",
            "deadline",
            "twist",
            "ilc",
            "trunc-weight",
            "trunc-order",
            "x-degree",
            "pair",
            "export",
        ],
        _ => &[],
    }
}

fn validate(cmd: &str, o: &Opts) -> Result<(), Outcome> {
    let given = [
        ("weights", o.weights.is_some()),
        ("degree-cap", o.degree_cap.is_some()),
        ("deadline", o.deadline.is_some()),
        ("twist", o.twist.is_some()),
        ("ilc", o.ilc.is_some()),
        ("trunc-weight", o.trunc_weight.is_some()),
        ("trunc-order", o.trunc_order.is_some()),
        ("x-degree", o.x_degree.is_some()),
        ("pair", o.pair.is_some()),
        ("export", o.export.is_some()),
    ];
    let ok = accepted(cmd);
    for (flag, present) in given {
        if present && !ok.contains(&flag) {
            return Err(Outcome::InputError(format!("--{flag} does not apply to {cmd}")));
        }
    }
    if o.twist.is_some() && o.ilc.is_some() {
        return Err(Outcome::InputError("--twist and --ilc are mutually exclusive".into()));
    }
    if cmd == "ilc-check" && o.ilc.is_none() {
        return Err(Outcome::InputError("ilc-check needs --ilc PATH".into()));
    }
    if let Some(d) = o.deadline {
        if !(d.is_finite() && d > 0.0) {
            return Err(Outcome::InputError("--deadline must be a positive number of seconds".into()));
        }
    }
    if matches!(o.trunc_weight, Some(w) if w < 1) {
        return Err(Outcome::InputError("--trunc-weight must be at least 1".into()));
    }
    if matches!(o.trunc_order, Some(0)) || matches!(o.x_degree, Some(0)) {
        return Err(Outcome::InputError("truncation bounds must be at least 1".into()));
    }
    Ok(())
}

fn read_expression(o: &Opts) -> Result<String, Outcome> {
    match (&o.expr, &o.file) {
        (Some(e), None) => Ok(e.clone()),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map(|s| s.trim().to_string())
            .map_err(|e| Outcome::InputError(format!("cannot read {}: {e}", p.display()))),
        _ => Err(Outcome::InputError("give the polynomial inline or with --file".into())),
    }
}

fn input_echo(o: &Opts, expr: Option<&str>) -> Value {
    let mut v = json!({ "expression": expr });
    let obj = v.as_object_mut().expect("object");
    if let Some(x) = &o.vars {
        obj.insert("vars".into(), json!(x));
    }
    if let Some(x) = &o.weights {
        obj.insert("weights".into(), json!(x));
    }
    if let Some(x) = o.trunc_weight {
        obj.insert("trunc_weight".into(), json!(x));
    }
    if let Some(x) = o.trunc_order {
        obj.insert("trunc_order".into(), json!(x));
    }
    if let Some(x) = o.x_degree {
        obj.insert("x_degree".into(), json!(x));
    }
    if let Some(x) = o.degree_cap {
        obj.insert("degree_cap".into(), json!(x));
    }
    if let Some(x) = o.deadline {
        obj.insert("deadline".into(), json!(x));
    }
    if let Some(x) = o.twist {
        obj.insert("twist".into(), json!(x));
    }
    if let Some(p) = &o.ilc {
        obj.insert("ilc".into(), json!(p.display().to_string()));
    }
    if let Some(p) = o.pair {
        obj.insert("pair".into(), json!(pair_of(Some(p)).name()));
    }
    v
}

fn gb_config(o: &Opts) -> GbConfig {
    GbConfig {
        deadline: o.deadline.map_or_else(Deadline::none, |s| Deadline::after(Duration::from_secs_f64(s))),
        selection: Selection::Sugar,
        degree_cap: o.degree_cap,
    }
}

fn pair_of(p: Option<PairArg>) -> Pair {
    match p {
        Some(PairArg::Logder) => Pair::LogDer,
        _ => Pair::Theta,
    }
}

pub fn run(cmd: &str, o: &Opts) -> Report {
    let expr = read_expression(o);
    let input = input_echo(o, expr.as_deref().ok());
    let computed = validate(cmd, o).and(expr).and_then(|text| {
        let d = DivisorInput::parse(&text, o.vars.as_deref())?;
        if let Some(w) = &o.weights {
            if w.len() != d.n() || !check_weights(&d, w) {
                return Err(Outcome::InputError(format!("weights {w:?} do not make f weighted homogeneous")));
            }
        }
        match cmd {
            "classify" => classify(&d, o),
            "logder" => logder(&d, o),
            "theta" => theta(&d, o),
            "rees-kernel" => rees(&d, o),
            "bfunction" => bfunction(&d, o),
            "spencer-verify" => spencer(&d, o),
            "ilc-check" => ilc_check(&d, o),
            _ => Err(Outcome::InputError(format!("unknown command {cmd}"))),
        }
    });
    match computed {
        Ok(Verdict::Pass(v)) => Report::ok(cmd, input, v),
        Ok(Verdict::Fail(v, why)) => Report::failed(cmd, input, v, why),
        Err(e) => Report::error(cmd, input, e),
    }
}

pub enum Verdict {
    Pass(Value),
    /// A check the command asserts did not hold.
    Fail(Value, String),
}

type Res = Result<Verdict, Outcome>;

fn weights_for(d: &DivisorInput, o: &Opts) -> Option<Vec<i64>> {
    o.weights.clone().or_else(|| is_quasi_homogeneous(d))
}

/// The Saito basis every command presents results over: homogeneous pieces
/// when f is weighted homogeneous, the generic one otherwise.
pub fn basis_for(d: &DivisorInput, o: &Opts) -> Result<(SaitoBasis, &'static str), Outcome> {
    if let Some(w) = weights_for(d, o) {
        if let Some(b) = homogeneous_saito_basis(d, &w)? {
            return Ok((b, "weighted homogeneous"));
        }
    }
    let ders = log_derivations_with(d, &gb_config(o))?;
    saito_basis(d, &ders)
        .map(|b| (b, "generic"))
        .ok_or_else(|| Outcome::Inconclusive("not recognized as free: no Saito basis among the generators".into()))
}

fn basis_json(b: &SaitoBasis) -> Value {
    json!({
        "fields": b.rows().iter().map(|r| json!({
            "field": r.to_string(),
            "a": r.a().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "alpha": r.alpha().to_string(),
        })).collect::<Vec<_>>(),
        "determinant_unit": fmt_rational(b.unit()),
    })
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

fn classify(d: &DivisorInput, o: &Opts) -> Res {
    let opts = ClassifyOptions { gb: gb_config(o), weights: o.weights.clone() };
    Ok(Verdict::Pass(classify_with(d, &opts)?.to_json()))
}

fn logder(d: &DivisorInput, o: &Opts) -> Res {
    let ders = log_derivations_with(d, &gb_config(o))?;
    let gens: Vec<Value> =
        ders.iter().map(|r| json!({ "field": r.to_string(), "alpha": r.alpha().to_string() })).collect();
    let basis = match basis_for(d, o) {
        Ok((b, kind)) => json!({ "kind": kind, "verified": b.verify(d.f()), "basis": basis_json(&b) }),
        Err(Outcome::Inconclusive(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(Verdict::Pass(json!({ "generators": gens, "free": !basis.is_null(), "saito_basis": basis })))
}

fn theta(d: &DivisorInput, o: &Opts) -> Res {
    let (b, kind) = basis_for(d, o)?;
    let ring = WeylRing::new(d.ring());
    let zetas: Vec<WeylOp> = b.rows().iter().map(|r| WeylOp::zeta(&ring, r)).collect();
    let fs = FsElement::f_s(&ring);
    let annihilate = zetas.iter().all(|z| act_on_fs(z, &fs, d.f()).numerator.is_zero());
    let regular = theta_symbols_regular(d, &b, &gb_config(o))?;
    Ok(Verdict::Pass(json!({
        "basis_kind": kind,
        "basis": basis_json(&b),
        "operators": strings(&zetas),
        "annihilate_f_s": annihilate,
        "total_symbols": strings(&theta_generators(d, &b)),
        "symbols_regular": regular,
    })))
}

fn rees(d: &DivisorInput, o: &Opts) -> Res {
    let cfg = gb_config(o);
    let gens = rees_kernel_with(d, &cfg)?;
    let sr = SymbolRing::new(d.ring());
    let ljt = match basis_for(d, o) {
        Ok((b, _)) => json!(is_linear_jacobian_type_with(d, &b, &cfg)?),
        Err(Outcome::Inconclusive(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(Verdict::Pass(json!({
        "variables": sr.ring().vars(),
        "generators": strings(&gens),
        "fibre_homogeneous": is_fibre_homogeneous(&sr, &gens),
        "linear_jacobian_type": ljt,
    })))
}

fn bfunction_options(o: &Opts) -> BFunctionOptions {
    let mut opts = BFunctionOptions::default();
    opts.gb.deadline = gb_config(o).deadline;
    if o.degree_cap.is_some() {
        opts.gb.degree_cap = o.degree_cap;
    }
    opts
}

fn threshold_json(t: Threshold) -> Value {
    match t {
        Threshold::From(k) => json!({ "kind": "from", "k0": k }),
        Threshold::Unbounded => json!({ "kind": "unbounded", "k0": Value::Null }),
    }
}

fn b_json(b: &BFunction) -> Value {
    json!({
        "b": b.poly().to_string(),
        "roots": b.roots().iter().map(|(r, m)| json!({ "root": fmt_rational(r), "multiplicity": m })).collect::<Vec<_>>(),
        "exact": b.exact,
        "threshold": threshold_json(lct_threshold(b)),
    })
}

fn bfunction(d: &DivisorInput, o: &Opts) -> Res {
    let (basis, _) = basis_for(d, o)?;
    let b = bfunction_via_theta_with(d, &basis, &bfunction_options(o))?;
    let mut v = b_json(&b);
    let cert = b.certificate.as_ref().expect("certificate");
    v["certificate"] = json!({
        "operator": cert.to_string(),
        "equation": "b(s) f^s = P f^(s+1)",
        "verified": verify_functional_equation(d.f(), b.poly(), cert),
    });
    if let Some(m) = o.twist {
        v["twisted"] = json!({ "m": m, "bfunction": b_json(&b.shifted(m)) });
    }
    Ok(Verdict::Pass(v))
}

fn connection(basis: &SaitoBasis, o: &Opts) -> Result<ILCData, Outcome> {
    match &o.ilc {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Outcome::InputError(format!("cannot read {}: {e}", p.display())))?;
            let e = ILCData::from_json(&text, basis)?;
            let sf = structure_functions(basis)?;
            Ok(e.check(&sf)?)
        }
        None => Ok(ILCData::line_bundle(basis, o.twist.unwrap_or(0))),
    }
}

fn spencer(d: &DivisorInput, o: &Opts) -> Res {
    let (basis, kind) = basis_for(d, o)?;
    let e = connection(&basis, o)?;
    let pair = pair_of(o.pair);
    let graded = is_quasi_homogeneous(d).is_some();
    let truncation = if graded {
        Truncation::Graded {
            max_weight: o.trunc_weight.unwrap_or(DEFAULT_WEIGHT),
            max_order: o.trunc_order.unwrap_or(DEFAULT_ORDER),
        }
    } else {
        if o.trunc_weight.is_some() {
            return Err(Outcome::InputError("--trunc-weight needs a weighted homogeneous f".into()));
        }
        Truncation::Filtration {
            max_order: o.trunc_order.unwrap_or(DEFAULT_BOX_ORDER),
            max_x_degree: o.x_degree.unwrap_or(DEFAULT_X_DEGREE),
        }
    };
    if graded && o.x_degree.is_some() {
        return Err(Outcome::InputError("--x-degree only applies to non-homogeneous f".into()));
    }
    let spec = SpencerSpec::new(d.clone(), basis.clone(), e.clone(), pair, truncation)?;
    let tc = build_spencer(&spec)?;
    if let Some(p) = &o.export {
        std::fs::write(p, tc.export_text())
            .map_err(|err| Outcome::InputError(format!("cannot write {}: {err}", p.display())))?;
    }
    let mut v = json!({
        "basis_kind": kind,
        "basis": basis_json(&basis),
        "connection": e.to_json(),
        "pair": pair.name(),
        "composition_zero": true,
    });
    let n = d.n() as i64;
    let Truncation::Graded { max_weight, max_order } = truncation else {
        let Truncation::Filtration { max_order, max_x_degree } = truncation else { unreachable!() };
        let ev = filtration_evidence(&tc)?;
        v["truncation"] = json!({
            "mode": "filtration",
            "N": max_order,
            "M": max_x_degree,
            "preimage_x_degree": ev.preimage_x_degree,
            "label": ev.label(),
        });
        v["evidence"] = json!(ev.rows.iter().map(|r| json!({
            "degree": r.degree,
            "kernel_dim": r.kernel_dim,
            "unexplained": r.unexplained,
        })).collect::<Vec<_>>());
        v["evidence_exact_below_zero"] = json!(ev.exact_below_zero());
        v["evidence_exact_at_zero"] = json!(ev.exact_at_zero());
        return Ok(Verdict::Pass(v));
    };
    v["truncation"] = json!({
        "mode": "graded",
        "W": max_weight,
        "N": max_order,
        "weights": spec.weights(),
        "field_weights": spec.field_weights(),
        "label": "exact statement per weight component",
    });
    let h = check_exactness(&tc, -n..=0)?;
    v["homology"] = json!(h.rows.iter().map(|r| json!({
        "weight": r.weight,
        "dims": r.dims,
        "ranks": r.ranks,
        "homology": r.homology.iter().map(|(d, x)| json!([d, x])).collect::<Vec<_>>(),
    })).collect::<Vec<_>>());
    v["exact_below_zero"] = json!(h.is_exact_below_zero());
    v["exact_at_zero"] = json!(h.is_exact_at_zero());
    let mut failures = Vec::new();
    if !h.is_exact_below_zero() {
        failures.push(format!("nonzero homology {:?}", h.nonzero()));
    }

    let b = bfunction_via_theta_with(d, &basis, &bfunction_options(o))
        .map_err(Outcome::from)
        .and_then(|b| bfunction_of_connection(&e, &b).map_err(Outcome::from));
    match b {
        Ok(b_e) => {
            let t = lct_threshold(&b_e);
            let k0 = t.value().unwrap_or(0);
            let mut rows = Vec::new();
            for k in k0..=k0 + 2 {
                let r = specialize_and_check(&tc, k, t)?;
                if !r.violations().is_empty() {
                    failures.push(format!("specialization fails at k = {k} in weights {:?}", r.violations()));
                }
                rows.push(json!({
                    "k": k,
                    "promised": r.promised,
                    "all_equal": r.all_equal(),
                    "segment_exact": r.segment_exact(),
                    "violations": r.violations(),
                }));
            }
            v["specialization"] = json!({ "bfunction": b_json(&b_e), "rows": rows });
        }
        Err(Outcome::Inconclusive(why)) => {
            v["specialization"] = json!({ "skipped": why });
        }
        Err(e) => return Err(e),
    }
    Ok(if failures.is_empty() { Verdict::Pass(v) } else { Verdict::Fail(v, failures.join("; ")) })
}

fn ilc_check(d: &DivisorInput, o: &Opts) -> Res {
    let (basis, kind) = basis_for(d, o)?;
    let path = o.ilc.as_ref().expect("validated");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::InputError(format!("cannot read {}: {e}", path.display())))?;
    let e = ILCData::from_json(&text, &basis)?;
    let sf = structure_functions(&basis)?;
    let n = sf.n();
    let mut c = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = sf.get(i, j, k);
                if i < j && !x.is_zero() {
                    c.push(json!({ "i": i, "j": j, "k": k, "c": x.to_string() }));
                }
            }
        }
    }
    let integrable = check_integrability(&e, &sf);
    let degree = if integrable { e.clone().check(&sf).ok().and_then(|x| x.line_bundle_degree()) } else { None };
    Ok(Verdict::Pass(json!({
        "basis_kind": kind,
        "basis": basis_json(&basis),
        "structure_functions": c,
        "rank": e.rank(),
        "integrable": integrable,
        "line_bundle_degree": degree,
    })))
}
