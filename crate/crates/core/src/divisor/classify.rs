//! The composite classification of a divisor at the origin.

use serde_json::{json, Value};

use super::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    /// Forced by a known implication; the string names it.
    Implied(&'static str),
    /// Not decided by this toolkit.
    Unknown(&'static str),
}

impl Provenance {
    pub fn label(&self) -> String {
        match self {
            Provenance::Computed => "computed".into(),
            Provenance::Implied(why) => format!("implied: {why}"),
            Provenance::Unknown(why) => format!("unknown: {why}"),
        }
    }
}

pub const QH_FREE_IMPLIES_LJT: &str = "quasi-homogeneous free divisors are of linear jacobian type";
pub const LJT_IMPLIES_DLT: &str = "linear jacobian type implies differential linear type";
pub const LJT_IMPLIES_KOSZUL: &str = "linear jacobian type implies Koszul free";
pub const LJT_IMPLIES_EULER: &str = "linear jacobian type implies Euler homogeneous";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag<T> {
    pub value: T,
    pub provenance: Provenance,
}

impl<T> Flag<T> {
    pub fn computed(value: T) -> Self {
        Flag { value, provenance: Provenance::Computed }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub gb: GbConfig,
    /// Weights to use instead of searching for them.
    pub weights: Option<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub f: Poly,
    pub log_derivations: Vec<LogDerivation>,
    pub saito: Option<SaitoBasis>,
    pub free: Flag<bool>,
    pub euler_homogeneous: Flag<bool>,
    pub quasi_homogeneous: Flag<Option<Vec<i64>>>,
    pub koszul_free: Option<Flag<bool>>,
    pub linear_jacobian_type: Option<Flag<bool>>,
    pub differential_linear_type: Flag<Option<bool>>,
    /// The total symbols of the Saito basis form a regular sequence.
    pub theta_koszul_pair: Option<Flag<bool>>,
    /// Set when germ conditions were decided in the polynomial ring for an
    /// input that is not quasi-homogeneous.
    pub global_test_caveat: bool,
    pub notes: Vec<String>,
}

fn flag_json<T: Into<Value> + Clone>(f: &Flag<T>) -> Value {
    json!({ "value": f.value.clone().into(), "provenance": f.provenance.label() })
}

impl ClassificationReport {
    pub fn is_free(&self) -> bool {
        self.free.value
    }

    pub fn to_json(&self) -> Value {
        let opt = |f: &Option<Flag<bool>>| match f {
            Some(x) => flag_json(x),
            None => json!({ "value": Value::Null, "provenance": "not computed: no Saito basis" }),
        };
        let qh = match &self.quasi_homogeneous.value {
            Some(w) => json!(w),
            None => Value::Null,
        };
        let dlt = match self.differential_linear_type.value {
            Some(b) => json!(b),
            None => Value::Null,
        };
        let saito = self.saito.as_ref().map(|b| {
            json!({
                "rows": b.rows().iter().map(|r| json!({
                    "a": r.a().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "alpha": r.alpha().to_string(),
                })).collect::<Vec<_>>(),
                "determinant_unit": crate::cas::poly::fmt_rational(b.unit()),
            })
        });
        json!({
            "f": self.f.to_string(),
            "variables": self.f.ring().vars(),
            "log_derivations": self.log_derivations.iter().map(|d| json!({
                "field": d.to_string(),
                "alpha": d.alpha().to_string(),
            })).collect::<Vec<_>>(),
            "saito_basis": saito,
            "free": flag_json(&self.free),
            "euler_homogeneous": flag_json(&self.euler_homogeneous),
            "quasi_homogeneous": { "value": qh, "provenance": self.quasi_homogeneous.provenance.label() },
            "koszul_free": opt(&self.koszul_free),
            "linear_jacobian_type": opt(&self.linear_jacobian_type),
            "differential_linear_type": { "value": dlt, "provenance": self.differential_linear_type.provenance.label() },
            "theta_koszul_pair": opt(&self.theta_koszul_pair),
            "global_test_caveat": self.global_test_caveat,
            "notes": self.notes,
        })
    }
}

pub fn classify(d: &DivisorInput) -> Result<ClassificationReport, DivisorError> {
    classify_with(d, &ClassifyOptions::default())
}

/// Runs every test and cross-checks the implications between them.
///
/// For quasi-homogeneous inputs an implication failure is an error. Otherwise
/// the tests are global and only carry a caveat, so failures become notes.
pub fn classify_with(d: &DivisorInput, opts: &ClassifyOptions) -> Result<ClassificationReport, DivisorError> {
    let cfg = &opts.gb;
    let mut notes = Vec::new();
    let ders = log_derivations_with(d, cfg)?;
    let saito = saito_basis(d, &ders);
    let euler = is_euler_homogeneous_with(d, cfg)?;
    let weights = match &opts.weights {
        Some(w) if check_weights(d, w) => Some(w.clone()),
        Some(w) => {
            notes.push(format!("supplied weights {w:?} do not make f weighted homogeneous; searched instead"));
            is_quasi_homogeneous(d)
        }
        None => is_quasi_homogeneous(d),
    };
    let qh = weights.is_some();
    let caveat = !qh;
    if caveat {
        notes.push("f is not quasi-homogeneous: germ properties were tested globally in the polynomial ring".into());
    }
    let mut report = ClassificationReport {
        f: d.f().clone(),
        log_derivations: ders,
        saito: saito.clone(),
        free: Flag::computed(saito.is_some()),
        euler_homogeneous: Flag::computed(euler),
        quasi_homogeneous: Flag::computed(weights),
        koszul_free: None,
        linear_jacobian_type: None,
        differential_linear_type: Flag { value: None, provenance: Provenance::Unknown("no direct test") },
        theta_koszul_pair: None,
        global_test_caveat: caveat,
        notes,
    };
    let Some(basis) = saito else {
        report.notes.push("not recognized as free at the origin; divisor-specific tests skipped".into());
        return Ok(report);
    };
    let koszul = is_koszul_free_with(d, &basis, cfg)?;
    let ljt = is_linear_jacobian_type_with(d, &basis, &GbConfig { selection: crate::cas::Selection::Sugar, ..cfg.clone() })?;
    let pair = theta_symbols_regular(d, &basis, cfg)?;
    report.koszul_free = Some(Flag::computed(koszul));
    report.linear_jacobian_type = Some(Flag::computed(ljt));
    report.theta_koszul_pair = Some(Flag::computed(pair));
    if ljt {
        report.differential_linear_type = Flag { value: Some(true), provenance: Provenance::Implied(LJT_IMPLIES_DLT) };
    }
    let mut violations = Vec::new();
    if qh && !ljt {
        violations.push(QH_FREE_IMPLIES_LJT);
    }
    if ljt && !koszul {
        violations.push(LJT_IMPLIES_KOSZUL);
    }
    if ljt && !euler {
        violations.push(LJT_IMPLIES_EULER);
    }
    for v in violations {
        if qh {
            return Err(DivisorError::ImplicationViolated(v.to_string()));
        }
        report.notes.push(format!("global test disagrees with the local implication: {v}"));
    }
    Ok(report)
}
