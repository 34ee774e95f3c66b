//! JSON documents. Every rational is a `"p"` or `"p/q"` string, complex numbers are
//! `{re, im}` pairs, and kernel indices `i, j` are one-based. Matrix positions in
//! certificates (permutations, congruences) are zero-based array indices.

use serde::{Deserialize, Serialize};

use crate::certify::{ElementaryCongruence, SignatureCertificate};
use crate::error::{Error, Result};
use crate::factor::{DifferenceOfSquares, NumericFactor, WeightedGramFactor};
use crate::hermform::{BihermitianForm, HermitianMatrix, HoloPoly, HoloPolyMatrix};
use crate::multiindex::MultiIndex;
use crate::scalar::{parse_rational, rational_to_string, GaussianRational, Rational};
use crate::stabilize::{Mode, StabilizationReport, StabilizationStep};
use crate::symbols::{EllipticReport, EllipticVerdict};

pub const FORM: &str = "bihermitian_form";
pub const CERTIFICATE: &str = "signature_certificate";
pub const WEIGHTED_FACTOR: &str = "weighted_factor";
pub const STABILIZATION: &str = "stabilization_report";
pub const DIFFERENCE: &str = "difference_of_squares";
pub const ELLIPTIC: &str = "elliptic_report";
pub const NUMERIC_FACTOR: &str = "numeric_factor";

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn expect_kind(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(bad(format!("expected kind {expected:?}, found {found:?}")))
    }
}

fn rational_from(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|_| bad(format!("invalid rational {s:?}")))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

impl From<&GaussianRational> for ComplexJson {
    fn from(c: &GaussianRational) -> Self {
        ComplexJson {
            re: c.re_string(),
            im: c.im_string(),
        }
    }
}

impl ComplexJson {
    pub fn to_gaussian(&self) -> Result<GaussianRational> {
        Ok(GaussianRational::new(rational_from(&self.re)?, rational_from(&self.im)?))
    }
}

fn complex_vec(v: &[ComplexJson]) -> Result<Vec<GaussianRational>> {
    v.iter().map(ComplexJson::to_gaussian).collect()
}

fn form_kind() -> String {
    FORM.to_string()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub i: usize,
    pub j: usize,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FormJson {
    #[serde(default = "form_kind")]
    pub kind: String,
    pub n: usize,
    pub r: usize,
    pub terms: Vec<TermJson>,
}

impl From<&BihermitianForm> for FormJson {
    fn from(f: &BihermitianForm) -> Self {
        FormJson {
            kind: form_kind(),
            n: f.n(),
            r: f.r(),
            terms: f
                .terms()
                .map(|(k, c)| TermJson {
                    i: k.i + 1,
                    j: k.j + 1,
                    alpha: k.alpha.exponents().to_vec(),
                    beta: k.beta.exponents().to_vec(),
                    re: c.re_string(),
                    im: c.im_string(),
                })
                .collect(),
        }
    }
}

impl FormJson {
    pub fn to_form(&self) -> Result<BihermitianForm> {
        expect_kind(&self.kind, FORM)?;
        if self.n == 0 || self.r == 0 {
            return Err(bad("form dimensions must be positive"));
        }
        let mut f = BihermitianForm::zero(self.n, self.r);
        for t in &self.terms {
            if !(1..=self.r).contains(&t.i) || !(1..=self.r).contains(&t.j) {
                return Err(bad(format!("term index ({}, {}) outside 1..={}", t.i, t.j, self.r)));
            }
            if t.alpha.len() != self.n || t.beta.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: t.alpha.len().max(t.beta.len()),
                });
            }
            let c = GaussianRational::new(rational_from(&t.re)?, rational_from(&t.im)?);
            f.add_term(t.i - 1, t.j - 1, MultiIndex::new(t.alpha.clone()), MultiIndex::new(t.beta.clone()), c);
        }
        Ok(f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HoloTermJson {
    pub alpha: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HoloMatrixJson {
    pub n: usize,
    pub s: usize,
    pub r: usize,
    /// `rows[k][j]` lists the terms of `A_kj`.
    pub rows: Vec<Vec<Vec<HoloTermJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl From<&HoloPolyMatrix> for HoloMatrixJson {
    fn from(a: &HoloPolyMatrix) -> Self {
        HoloMatrixJson {
            n: a.n(),
            s: a.s(),
            r: a.r(),
            rows: (0..a.s())
                .map(|k| {
                    a.row(k)
                        .iter()
                        .map(|p| {
                            p.terms()
                                .map(|(alpha, c)| HoloTermJson {
                                    alpha: alpha.exponents().to_vec(),
                                    re: c.re_string(),
                                    im: c.im_string(),
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            weights: a.weights().map(|w| w.iter().map(rational_to_string).collect()),
        }
    }
}

impl HoloMatrixJson {
    pub fn to_matrix(&self) -> Result<HoloPolyMatrix> {
        if self.rows.len() != self.s || self.n == 0 {
            return Err(bad(format!("expected {} rows, found {}", self.s, self.rows.len())));
        }
        let mut rows = Vec::with_capacity(self.s);
        for row in &self.rows {
            if row.len() != self.r {
                return Err(bad(format!("expected {} columns, found {}", self.r, row.len())));
            }
            let mut polys = Vec::with_capacity(self.r);
            for cell in row {
                let mut p = HoloPoly::zero(self.n);
                for t in cell {
                    if t.alpha.len() != self.n {
                        return Err(Error::DimensionMismatch {
                            expected: self.n,
                            found: t.alpha.len(),
                        });
                    }
                    let c = GaussianRational::new(rational_from(&t.re)?, rational_from(&t.im)?);
                    p.add_term(MultiIndex::new(t.alpha.clone()), c);
                }
                polys.push(p);
            }
            rows.push(polys);
        }
        let m = HoloPolyMatrix::from_rows(self.n, self.r, rows)?;
        match &self.weights {
            Some(w) => m.with_weights(w.iter().map(|s| rational_from(s)).collect::<Result<_>>()?),
            None => Ok(m),
        }
    }
}

fn matrix_rows(m: &HermitianMatrix) -> Vec<Vec<ComplexJson>> {
    m.rows().map(|row| row.iter().map(ComplexJson::from).collect()).collect()
}

fn matrix_from_rows(rows: &[Vec<ComplexJson>]) -> Result<HermitianMatrix> {
    let rows = rows.iter().map(|r| complex_vec(r)).collect::<Result<Vec<_>>>()?;
    HermitianMatrix::from_rows(rows)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CongruenceJson {
    pub target: usize,
    pub source: usize,
    pub factor: ComplexJson,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    pub size: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
    pub matrix: Vec<Vec<ComplexJson>>,
    pub permutation: Vec<usize>,
    pub congruences: Vec<CongruenceJson>,
    pub l: Vec<Vec<ComplexJson>>,
    pub d: Vec<String>,
    pub witness: Option<Vec<ComplexJson>>,
    pub witness_value: Option<String>,
}

impl From<&SignatureCertificate> for CertificateJson {
    fn from(c: &SignatureCertificate) -> Self {
        let n = c.size();
        CertificateJson {
            kind: CERTIFICATE.to_string(),
            size: n,
            n_pos: c.n_pos,
            n_neg: c.n_neg,
            n_zero: c.n_zero,
            matrix: matrix_rows(&c.matrix),
            permutation: c.permutation.clone(),
            congruences: c
                .congruences
                .iter()
                .map(|op| CongruenceJson {
                    target: op.target,
                    source: op.source,
                    factor: (&op.factor).into(),
                })
                .collect(),
            l: (0..n).map(|a| (0..n).map(|b| c.l_entry(a, b).into()).collect()).collect(),
            d: c.d.iter().map(rational_to_string).collect(),
            witness: c.witness.as_ref().map(|v| v.iter().map(ComplexJson::from).collect()),
            witness_value: c.witness_value.as_ref().map(rational_to_string),
        }
    }
}

impl CertificateJson {
    pub fn to_certificate(&self) -> Result<SignatureCertificate> {
        expect_kind(&self.kind, CERTIFICATE)?;
        let n = self.size;
        if self.matrix.len() != n || self.l.len() != n || self.l.iter().any(|row| row.len() != n) {
            return Err(bad(format!("certificate arrays do not match size {n}")));
        }
        Ok(SignatureCertificate {
            matrix: matrix_from_rows(&self.matrix)?,
            n_pos: self.n_pos,
            n_neg: self.n_neg,
            n_zero: self.n_zero,
            permutation: self.permutation.clone(),
            congruences: self
                .congruences
                .iter()
                .map(|op| {
                    Ok(ElementaryCongruence {
                        target: op.target,
                        source: op.source,
                        factor: op.factor.to_gaussian()?,
                    })
                })
                .collect::<Result<_>>()?,
            l: self.l.iter().flatten().map(ComplexJson::to_gaussian).collect::<Result<_>>()?,
            d: self.d.iter().map(|s| rational_from(s)).collect::<Result<_>>()?,
            witness: self.witness.as_deref().map(complex_vec).transpose()?,
            witness_value: self.witness_value.as_deref().map(rational_from).transpose()?,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightedFactorJson {
    pub kind: String,
    /// Homogeneous degree of the rows, when they have one.
    pub degree: Option<u32>,
    pub rows: HoloMatrixJson,
    pub target: FormJson,
}

impl From<&WeightedGramFactor> for WeightedFactorJson {
    fn from(w: &WeightedGramFactor) -> Self {
        WeightedFactorJson {
            kind: WEIGHTED_FACTOR.to_string(),
            degree: w.rows.homogeneous_degree(),
            rows: (&w.rows).into(),
            target: (&w.target).into(),
        }
    }
}

impl WeightedFactorJson {
    pub fn to_factor(&self) -> Result<WeightedGramFactor> {
        expect_kind(&self.kind, WEIGHTED_FACTOR)?;
        let rows = self.rows.to_matrix()?;
        if rows.homogeneous_degree() != self.degree && rows.s() > 0 {
            return Err(bad("row degree does not match the recorded degree"));
        }
        Ok(WeightedGramFactor {
            rows,
            target: self.target.to_form()?,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub d: u32,
    pub passed: bool,
    pub certificate: CertificateJson,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StabilizationJson {
    pub kind: String,
    pub mode: Mode,
    pub bidegree: u32,
    pub d_max: u32,
    pub d_min: Option<u32>,
    pub form: FormJson,
    pub steps: Vec<StepJson>,
    pub factor: Option<WeightedFactorJson>,
}

impl From<&StabilizationReport> for StabilizationJson {
    fn from(r: &StabilizationReport) -> Self {
        StabilizationJson {
            kind: STABILIZATION.to_string(),
            mode: r.mode,
            bidegree: r.bidegree,
            d_max: r.d_max,
            d_min: r.d_min,
            form: (&r.form).into(),
            steps: r
                .steps
                .iter()
                .map(|s| StepJson {
                    d: s.d,
                    passed: s.passed,
                    certificate: (&s.certificate).into(),
                })
                .collect(),
            factor: r.factor.as_ref().map(Into::into),
        }
    }
}

impl StabilizationJson {
    pub fn to_report(&self) -> Result<StabilizationReport> {
        expect_kind(&self.kind, STABILIZATION)?;
        Ok(StabilizationReport {
            mode: self.mode,
            form: self.form.to_form()?,
            bidegree: self.bidegree,
            d_max: self.d_max,
            d_min: self.d_min,
            steps: self
                .steps
                .iter()
                .map(|s| {
                    Ok(StabilizationStep {
                        d: s.d,
                        passed: s.passed,
                        certificate: s.certificate.to_certificate()?,
                    })
                })
                .collect::<Result<_>>()?,
            factor: self.factor.as_ref().map(WeightedFactorJson::to_factor).transpose()?,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DifferenceJson {
    pub kind: String,
    pub form: FormJson,
    pub positive: WeightedFactorJson,
    pub negative: WeightedFactorJson,
    pub certificate: CertificateJson,
}

impl DifferenceJson {
    pub fn new(form: &BihermitianForm, ds: &DifferenceOfSquares) -> Self {
        DifferenceJson {
            kind: DIFFERENCE.to_string(),
            form: form.into(),
            positive: (&ds.positive).into(),
            negative: (&ds.negative).into(),
            certificate: (&ds.certificate).into(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerdictJson {
    Certified { d: u32 },
    NotCertified { d_max: u32 },
    NotElliptic { point: Vec<ComplexJson>, value: String },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OperatorRowJson {
    pub weight: String,
    pub operator: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EllipticJson {
    pub kind: String,
    pub symbol: String,
    pub order: u32,
    pub negated: bool,
    pub verdict: VerdictJson,
    pub e_matrix: Option<Vec<Vec<ComplexJson>>>,
    pub operator_rows: Vec<OperatorRowJson>,
    pub zero_set_check: String,
    pub stabilization: StabilizationJson,
}

impl From<&EllipticReport> for EllipticJson {
    fn from(r: &EllipticReport) -> Self {
        EllipticJson {
            kind: ELLIPTIC.to_string(),
            symbol: r.symbol.to_string(),
            order: r.order,
            negated: r.negated,
            verdict: match &r.verdict {
                EllipticVerdict::Certified { d } => VerdictJson::Certified { d: *d },
                EllipticVerdict::NotCertified { d_max } => VerdictJson::NotCertified { d_max: *d_max },
                EllipticVerdict::NotElliptic { point, value } => VerdictJson::NotElliptic {
                    point: point.iter().map(ComplexJson::from).collect(),
                    value: rational_to_string(value),
                },
            },
            e_matrix: r.e_matrix.as_ref().map(matrix_rows),
            operator_rows: r
                .operator_rows()
                .into_iter()
                .map(|(w, op)| OperatorRowJson {
                    weight: rational_to_string(&w),
                    operator: op,
                })
                .collect(),
            zero_set_check: r.zero_set_check.to_string(),
            stabilization: (&r.stabilization).into(),
        }
    }
}

impl EllipticJson {
    pub fn e_matrix(&self) -> Result<Option<HermitianMatrix>> {
        self.e_matrix.as_deref().map(matrix_from_rows).transpose()
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct NumericTermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct NumericFactorJson {
    pub kind: String,
    pub digits: usize,
    pub n: usize,
    pub r: usize,
    pub rows: Vec<Vec<Vec<NumericTermJson>>>,
}

impl NumericFactorJson {
    pub fn new(f: &NumericFactor, digits: usize) -> Self {
        NumericFactorJson {
            kind: NUMERIC_FACTOR.to_string(),
            digits,
            n: f.n,
            r: f.r,
            rows: f
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|terms| {
                            terms
                                .iter()
                                .map(|(a, c)| NumericTermJson {
                                    alpha: a.exponents().to_vec(),
                                    re: c.re,
                                    im: c.im,
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Reads a form from its JSON document.
pub fn form_from_json(text: &str) -> Result<BihermitianForm> {
    let doc: FormJson = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    doc.to_form()
}

pub fn form_to_json(f: &BihermitianForm) -> String {
    serde_json::to_string_pretty(&FormJson::from(f)).expect("form serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::ldl_signature;
    use crate::factor::holomorphic_factor;
    use crate::hermform::parse_form;
    use crate::stabilize::find_minimal_d;

    #[test]
    fn form_round_trip() {
        let f = parse_form("[[z1*zb1, (1/2+i)*z1*zb2], [(1/2-i)*z2*zb1, 3*z2*zb2]]", None).unwrap();
        let text = form_to_json(&f);
        assert!(text.contains("\"re\": \"1/2\""));
        assert_eq!(form_from_json(&text).unwrap(), f);
        let without_kind = r#"{"n": 1, "r": 1, "terms": [{"i": 1, "j": 1, "alpha": [1], "beta": [1], "re": "2", "im": "0"}]}"#;
        assert_eq!(form_from_json(without_kind).unwrap(), parse_form("2*z1*zb1", None).unwrap());
        let bad_index = without_kind.replace("\"i\": 1", "\"i\": 2");
        assert!(form_from_json(&bad_index).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let f = parse_form("(z1*zb1 - z2*zb2)^2", None).unwrap();
        let (m, _) = f.coefficient_matrix().unwrap();
        let c = ldl_signature(&m);
        let doc = CertificateJson::from(&c);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_certificate().unwrap(), c);
    }

    #[test]
    fn factor_and_report_round_trip() {
        let f = parse_form("z1^2*zb1^2 + 2*z1*z2*zb1*zb2 + z2^2*zb2^2", None).unwrap();
        let w = holomorphic_factor(&f).unwrap().unwrap();
        let doc = WeightedFactorJson::from(&w);
        assert_eq!(doc.degree, Some(2));
        assert_eq!(doc.to_factor().unwrap(), w);

        let report = find_minimal_d(&f, Mode::Strict, 3).unwrap();
        let doc = StabilizationJson::from(&report);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"mode\":\"strict\""));
        let back: StabilizationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_report().unwrap(), report);
    }
}
