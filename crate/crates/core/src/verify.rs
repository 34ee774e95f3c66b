//! Independent re-validation of serialized certificates and reports.
//!
//! [`verify_document`] walks a JSON value and checks every object whose `kind` it
//! recognizes. Certificates are re-checked against `P·E·M·E*·Pᵀ = L·D·L*` and must
//! also be the canonical record that [`ldl_signature`] produces for their matrix, so
//! an altered witness that happens to remain negative is still rejected. Factors
//! are re-multiplied, and reports are checked for consistency with the objects
//! they embed (for example, each stabilization step must certify the coefficient
//! matrix of the correspondingly shifted form).

use num_traits::{One, Signed};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certify::ldl_signature;
use crate::factor::difference_of_squares;
use crate::hermform::{BihermitianForm, HermitianMatrix};
use crate::scalar::{GaussianRational, Rational};
use crate::serial::{
    CertificateJson, DifferenceJson, EllipticJson, FormJson, StabilizationJson, VerdictJson,
    WeightedFactorJson, CERTIFICATE, DIFFERENCE, ELLIPTIC, STABILIZATION, WEIGHTED_FACTOR,
};
use crate::stabilize::{multiplier_power, multiplier_shift, Mode};
use crate::symbols::{parse_symbol, real_to_complex};

pub const CHECK: &str = "check_report";

/// Outcome of testing one form at one shift, as emitted by `check` and `factor`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckJson {
    pub kind: String,
    pub mode: Mode,
    pub d: u32,
    pub passed: bool,
    pub form: FormJson,
    pub certificate: CertificateJson,
    pub factor: Option<WeightedFactorJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct VerificationReport {
    /// JSON paths and kinds of every object examined.
    pub checked: Vec<(String, String)>,
    /// JSON paths with the reason each check failed.
    pub failures: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn recognized(&self) -> bool {
        !self.checked.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.recognized() && self.failures.is_empty()
    }
}

type Check = std::result::Result<(), String>;

fn decode<T: DeserializeOwned>(v: &Value) -> std::result::Result<T, String> {
    serde_json::from_value(v.clone()).map_err(|e| format!("malformed document: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shifted_matrix(form: &BihermitianForm, d: u32) -> std::result::Result<HermitianMatrix, String> {
    let m = form.bidegree().ok_or("form is not bihomogeneous")?;
    let g = multiplier_power(form, d).map_err(|e| e.to_string())?;
    Ok(g.coefficient_matrix_at(m + d).map_err(|e| e.to_string())?.0)
}

fn check_certificate(v: &Value) -> Check {
    let doc: CertificateJson = decode(v)?;
    let cert = doc.to_certificate().map_err(|e| e.to_string())?;
    ensure(doc.size == cert.matrix.size(), || "size does not match the matrix".into())?;
    cert.verify()?;
    ensure(ldl_signature(&cert.matrix) == cert, || "not the canonical LDL* record of its matrix".into())
}

fn check_factor(v: &Value) -> Check {
    let doc: WeightedFactorJson = decode(v)?;
    let w = doc.to_factor().map_err(|e| e.to_string())?;
    ensure(w.reconstructs(), || "rows do not reproduce the target".into())
}

fn check_stabilization(v: &Value) -> Check {
    let doc: StabilizationJson = decode(v)?;
    let report = doc.to_report().map_err(|e| e.to_string())?;
    let form = &report.form;
    ensure(form.is_hermitian_symmetric(), || "form is not hermitian-symmetric".into())?;
    ensure(form.bidegree() == Some(report.bidegree), || "bidegree does not match the form".into())?;
    let mut current = form.clone();
    for (k, step) in report.steps.iter().enumerate() {
        ensure(step.d as usize == k, || format!("step {k} records d = {}", step.d))?;
        if k > 0 {
            current = multiplier_shift(&current).map_err(|e| e.to_string())?;
        }
        let (m, _) = current
            .coefficient_matrix_at(report.bidegree + step.d)
            .map_err(|e| e.to_string())?;
        ensure(step.certificate.matrix == m, || format!("step d = {} certifies a different matrix", step.d))?;
        ensure(step.passed == report.mode.accepts(&step.certificate), || {
            format!("step d = {} has the wrong verdict", step.d)
        })?;
        let last = k + 1 == report.steps.len();
        ensure(last || !step.passed, || format!("search continued past a passing step d = {}", step.d))?;
    }
    match report.d_min {
        Some(d) => {
            let last = report.steps.last().ok_or("d_min without steps")?;
            ensure(last.passed && last.d == d, || "d_min is not the first passing step".into())?;
            ensure(d <= report.d_max, || "d_min exceeds d_max".into())?;
            let factor = report.factor.as_ref().ok_or("missing factor")?;
            ensure(factor.target == current, || "factor target is not the shifted form".into())?;
        }
        None => {
            ensure(report.steps.len() as u64 == report.d_max as u64 + 1, || "search stopped before d_max".into())?;
            ensure(report.steps.iter().all(|s| !s.passed), || "a passing step without d_min".into())?;
            ensure(report.factor.is_none(), || "factor without d_min".into())?;
        }
    }
    Ok(())
}

fn check_difference(v: &Value) -> Check {
    let doc: DifferenceJson = decode(v)?;
    let form = doc.form.to_form().map_err(|e| e.to_string())?;
    let pos = doc.positive.to_factor().map_err(|e| e.to_string())?;
    let neg = doc.negative.to_factor().map_err(|e| e.to_string())?;
    let cert = doc.certificate.to_certificate().map_err(|e| e.to_string())?;
    let diff = pos
        .target
        .add(&neg.target.scale(&GaussianRational::from_int(-1)))
        .map_err(|e| e.to_string())?;
    ensure(diff == form, || "positive minus negative part is not the form".into())?;
    let expected = difference_of_squares(&form).map_err(|e| e.to_string())?;
    ensure(cert.matrix == expected.certificate.matrix, || "certificate is for a different matrix".into())?;
    ensure(pos.len() == cert.n_pos && neg.len() == cert.n_neg, || "row counts disagree with the inertia".into())
}

fn check_elliptic(v: &Value) -> Check {
    let doc: EllipticJson = decode(v)?;
    let stab = doc.stabilization.to_report().map_err(|e| e.to_string())?;
    let symbol = parse_symbol(&doc.symbol, Some(stab.form.n())).map_err(|e| e.to_string())?;
    ensure(symbol.order() == Some(doc.order), || "order does not match the symbol".into())?;
    let mut form = real_to_complex(&symbol).map_err(|e| e.to_string())?;
    if doc.negated {
        form = form.scale(&GaussianRational::from_int(-1));
    }
    ensure(form == stab.form, || "stabilized form is not the symbol's complex form".into())?;
    ensure(stab.mode == Mode::Strict, || "ellipticity needs the strict test".into())?;
    let e_matrix = doc.e_matrix().map_err(|e| e.to_string())?;
    match &doc.verdict {
        VerdictJson::Certified { d } => {
            ensure(stab.d_min == Some(*d), || "certified d differs from d_min".into())?;
            let last = stab.last_step().ok_or("no steps")?;
            ensure(e_matrix.as_ref() == Some(&last.certificate.matrix), || "E-matrix is not the certified matrix".into())
        }
        VerdictJson::NotCertified { d_max } => {
            ensure(stab.d_min.is_none() && stab.d_max == *d_max, || "inconsistent d_max".into())?;
            ensure(e_matrix.is_none(), || "E-matrix without a certificate".into())
        }
        VerdictJson::NotElliptic { point, value } => {
            ensure(stab.d_min.is_none(), || "witness alongside a certificate".into())?;
            let z = point.iter().map(|c| c.to_gaussian()).collect::<crate::Result<Vec<_>>>().map_err(|e| e.to_string())?;
            let norm: Rational = z.iter().map(GaussianRational::norm_sqr).sum();
            ensure(norm.is_one(), || "witness point is not on the unit sphere".into())?;
            let actual = form.evaluate_exact(&z, &z).map_err(|e| e.to_string())?[0][0].clone();
            let value = crate::scalar::parse_rational(value).map_err(|e| e.to_string())?;
            ensure(actual == GaussianRational::from_real(value.clone()), || "witness value is wrong".into())?;
            ensure(!value.is_positive(), || "witness value is positive".into())
        }
    }
}

fn check_report(v: &Value) -> Check {
    let doc: CheckJson = decode(v)?;
    let form = doc.form.to_form().map_err(|e| e.to_string())?;
    let cert = doc.certificate.to_certificate().map_err(|e| e.to_string())?;
    ensure(cert.matrix == shifted_matrix(&form, doc.d)?, || "certificate is for a different matrix".into())?;
    ensure(doc.passed == doc.mode.accepts(&cert), || "verdict disagrees with the certificate".into())?;
    if let Some(factor) = &doc.factor {
        ensure(doc.passed, || "factor attached to a failing check".into())?;
        let w = factor.to_factor().map_err(|e| e.to_string())?;
        let target = multiplier_power(&form, doc.d).map_err(|e| e.to_string())?;
        ensure(w.target == target, || "factor target is not the shifted form".into())?;
    }
    Ok(())
}

fn check_kind(kind: &str, v: &Value) -> Option<Check> {
    Some(match kind {
        CERTIFICATE => check_certificate(v),
        WEIGHTED_FACTOR => check_factor(v),
        STABILIZATION => check_stabilization(v),
        DIFFERENCE => check_difference(v),
        ELLIPTIC => check_elliptic(v),
        CHECK => check_report(v),
        _ => return None,
    })
}

fn walk(v: &Value, path: &str, out: &mut VerificationReport) {
    match v {
        Value::Object(map) => {
            if let Some(Value::String(kind)) = map.get("kind") {
                if let Some(result) = check_kind(kind, v) {
                    out.checked.push((path.to_string(), kind.clone()));
                    if let Err(msg) = result {
                        out.failures.push((path.to_string(), msg));
                    }
                }
            }
            for (key, child) in map {
                walk(child, &format!("{path}/{key}"), out);
            }
        }
        Value::Array(items) => {
            for (k, child) in items.iter().enumerate() {
                walk(child, &format!("{path}/{k}"), out);
            }
        }
        _ => {}
    }
}

/// Checks every recognized object in `doc`, including nested ones.
pub fn verify_document(doc: &Value) -> VerificationReport {
    let mut out = VerificationReport::default();
    walk(doc, "", &mut out);
    out
}
