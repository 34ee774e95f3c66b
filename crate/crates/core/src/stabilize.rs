//! Multiplier stabilization: the least `d` such that `⟨z,w⟩^d · F` has a
//! positive (semi)definite coefficient matrix.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{ldl_signature, SignatureCertificate};
use crate::error::{Error, Result};
use crate::factor::{factor_from_certificate, WeightedGramFactor};
use crate::hermform::BihermitianForm;
use crate::multiindex::{enumerate_degree, multinomial};
use crate::scalar::GaussianRational;

/// Whether the coefficient matrix must be definite or only semidefinite.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Semi,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Semi => "semi",
        }
    }

    pub fn accepts(self, cert: &SignatureCertificate) -> bool {
        match self {
            Mode::Strict => cert.is_positive_definite(),
            Mode::Semi => cert.is_positive_semidefinite(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "semi" => Ok(Mode::Semi),
            other => Err(Error::InvalidMode(other.to_string())),
        }
    }
}

/// `⟨z,w⟩ · F`: every coefficient `(α, β)` moves to `(α + e_k, β + e_k)` for each `k`.
pub fn multiplier_shift(f: &BihermitianForm) -> Result<BihermitianForm> {
    if !f.is_zero() && f.bidegree().is_none() {
        return Err(Error::NotBihomogeneous);
    }
    let n = f.n();
    let mut out = BihermitianForm::zero(n, f.r());
    for (key, c) in f.terms() {
        for k in 0..n {
            let mut a = key.alpha.exponents().to_vec();
            let mut b = key.beta.exponents().to_vec();
            a[k] += 1;
            b[k] += 1;
            out.add_term(key.i, key.j, a.into(), b.into(), c.clone());
        }
    }
    Ok(out)
}

/// `⟨z,w⟩^d · F` via the multinomial expansion `Σ_{|γ|=d} d!/γ! z^γ w̄^γ`.
pub fn multiplier_power(f: &BihermitianForm, d: u32) -> Result<BihermitianForm> {
    if !f.is_zero() && f.bidegree().is_none() {
        return Err(Error::NotBihomogeneous);
    }
    let n = f.n();
    let gammas: Vec<_> = enumerate_degree(n, d)
        .into_iter()
        .map(|g| {
            let c = multinomial(d, &g)?;
            Ok((g, GaussianRational::from_real(c)))
        })
        .collect::<Result<_>>()?;
    let mut out = BihermitianForm::zero(n, f.r());
    for (key, c) in f.terms() {
        for (g, m) in &gammas {
            out.add_term(key.i, key.j, &key.alpha + g, &key.beta + g, c * m);
        }
    }
    Ok(out)
}

/// Outcome of testing one shift `d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizationStep {
    pub d: u32,
    pub passed: bool,
    pub certificate: SignatureCertificate,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizationReport {
    pub mode: Mode,
    pub form: BihermitianForm,
    pub bidegree: u32,
    pub d_max: u32,
    pub d_min: Option<u32>,
    /// One entry per `d = 0, 1, …` up to `d_min` (or `d_max` if none passes).
    pub steps: Vec<StabilizationStep>,
    /// Factor of `⟨z,w⟩^{d_min} · F` when found.
    pub factor: Option<WeightedGramFactor>,
}

impl StabilizationReport {
    pub fn last_step(&self) -> Option<&StabilizationStep> {
        self.steps.last()
    }
}

/// Searches `d = 0..=d_max` for the first shift whose coefficient matrix passes `mode`.
pub fn find_minimal_d(f: &BihermitianForm, mode: Mode, d_max: u32) -> Result<StabilizationReport> {
    if !f.is_hermitian_symmetric() {
        return Err(Error::NotHermitianSymmetric);
    }
    let bidegree = f.bidegree().ok_or(Error::NotBihomogeneous)?;
    let mut steps = Vec::new();
    let mut current = f.clone();
    for d in 0..=d_max {
        if d > 0 {
            current = multiplier_shift(&current)?;
        }
        let (m, basis) = current.coefficient_matrix_at(bidegree + d)?;
        let cert = ldl_signature(&m);
        let passed = mode.accepts(&cert);
        if passed {
            let factor = factor_from_certificate(&current, &basis, &cert);
            steps.push(StabilizationStep { d, passed, certificate: cert });
            return Ok(StabilizationReport {
                mode,
                form: f.clone(),
                bidegree,
                d_max,
                d_min: Some(d),
                steps,
                factor: Some(factor),
            });
        }
        steps.push(StabilizationStep { d, passed, certificate: cert });
    }
    Ok(StabilizationReport {
        mode,
        form: f.clone(),
        bidegree,
        d_max,
        d_min: None,
        steps,
        factor: None,
    })
}

/// One row of a sweep.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub label: String,
    pub report: Result<StabilizationReport>,
    pub elapsed: Duration,
}

impl SweepEntry {
    /// Size of the last coefficient matrix examined.
    pub fn size(&self) -> Option<usize> {
        let report = self.report.as_ref().ok()?;
        report.last_step().map(|s| s.certificate.size())
    }
}

/// Runs [`find_minimal_d`] over a labelled family. Results keep the input order.
pub fn stabilization_sweep(
    family: &[(String, BihermitianForm)],
    mode: Mode,
    d_max: u32,
    parallel: bool,
) -> Vec<SweepEntry> {
    let run = |(label, f): &(String, BihermitianForm)| {
        let start = Instant::now();
        let report = find_minimal_d(f, mode, d_max);
        SweepEntry {
            label: label.clone(),
            report,
            elapsed: start.elapsed(),
        }
    };
    if parallel {
        family.par_iter().map(run).collect()
    } else {
        family.iter().map(run).collect()
    }
}
