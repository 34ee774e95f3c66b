//! Holomorphic factorizations `F(z, w̄) = A(w)*·A(z)` and difference-of-squares
//! splittings, read off exact LDL* certificates of the coefficient matrix.
//!
//! Exact factors keep the pivots as explicit row weights: the rows `A_k` and weights
//! `a_k > 0` satisfy `F_ij(z, w̄) = Σ_k a_k A_kj(z) conj(A_ki(w))`. Square roots of
//! the weights only enter [`numeric_factor`].

use num_complex::Complex64;
use num_traits::Zero;

use crate::certify::{gram_from_certificate, ldl_signature, SignatureCertificate};
use crate::error::{Error, Result};
use crate::hermform::{BihermitianForm, CoefficientBasis, HoloPoly, HoloPolyMatrix, HermitianMatrix};
use crate::multiindex::MultiIndex;
use crate::scalar::{rational_to_f64, GaussianRational, Rational};

/// Weighted rows whose Gram kernel is `target`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedGramFactor {
    pub rows: HoloPolyMatrix,
    pub target: BihermitianForm,
}

impl WeightedGramFactor {
    pub fn len(&self) -> usize {
        self.rows.s()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.s() == 0
    }

    /// Exact reconstruction check: `gram(rows) == target`.
    pub fn reconstructs(&self) -> bool {
        BihermitianForm::gram(&self.rows) == self.target
    }
}

/// `f = gram(positive) - gram(negative)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DifferenceOfSquares {
    pub positive: WeightedGramFactor,
    pub negative: WeightedGramFactor,
    pub certificate: SignatureCertificate,
}

impl DifferenceOfSquares {
    pub fn reconstruct(&self) -> Result<BihermitianForm> {
        let pos = BihermitianForm::gram(&self.positive.rows);
        let neg = BihermitianForm::gram(&self.negative.rows);
        pos.add(&neg.scale(&GaussianRational::from_int(-1)))
    }
}

/// Turns coefficient vectors over `basis` into weighted holomorphic rows.
pub(crate) fn rows_from_vectors(
    basis: &CoefficientBasis,
    terms: &[(Rational, Vec<GaussianRational>)],
) -> HoloPolyMatrix {
    let n = basis.n();
    let r = basis.r();
    let mut rows = Vec::with_capacity(terms.len());
    for (_, u) in terms {
        let mut row = vec![HoloPoly::zero(n); r];
        for (k, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, alpha) = basis.label(k);
            row[j].add_term(alpha.clone(), c.clone());
        }
        rows.push(row);
    }
    let weights = terms.iter().map(|(w, _)| w.clone()).collect();
    HoloPolyMatrix::from_rows(n, r, rows)
        .and_then(|m| m.with_weights(weights))
        .expect("rows built from a consistent basis")
}

/// Splits into positive and negative parts, exactly. Uses the degree-`m` basis for
/// bihomogeneous input and the graded basis up to the top degree otherwise.
pub fn difference_of_squares(f: &BihermitianForm) -> Result<DifferenceOfSquares> {
    if !f.is_hermitian_symmetric() {
        return Err(Error::NotHermitianSymmetric);
    }
    let (m, basis) = match f.bidegree() {
        Some(_) => f.coefficient_matrix()?,
        None if f.is_zero() => f.coefficient_matrix()?,
        None => f.coefficient_matrix_generalized()?,
    };
    let cert = ldl_signature(&m);
    let gd = gram_from_certificate(&cert);
    let positive = rows_from_vectors(&basis, &gd.positive);
    let negative = rows_from_vectors(&basis, &gd.negative);
    Ok(DifferenceOfSquares {
        positive: WeightedGramFactor {
            target: BihermitianForm::gram(&positive),
            rows: positive,
        },
        negative: WeightedGramFactor {
            target: BihermitianForm::gram(&negative),
            rows: negative,
        },
        certificate: cert,
    })
}

fn bihomogeneous_matrix(f: &BihermitianForm) -> Result<(HermitianMatrix, CoefficientBasis)> {
    if !f.is_hermitian_symmetric() {
        return Err(Error::NotHermitianSymmetric);
    }
    match f.bidegree() {
        Some(_) => f.coefficient_matrix(),
        None if f.is_zero() => f.coefficient_matrix(),
        None => Err(Error::NotBihomogeneous),
    }
}

/// Factor of a form whose coefficient matrix is already certified PSD.
pub(crate) fn factor_from_certificate(
    f: &BihermitianForm,
    basis: &CoefficientBasis,
    cert: &SignatureCertificate,
) -> WeightedGramFactor {
    debug_assert!(cert.is_positive_semidefinite());
    let gd = gram_from_certificate(cert);
    WeightedGramFactor {
        rows: rows_from_vectors(basis, &gd.positive),
        target: f.clone(),
    }
}

/// `Some` iff the coefficient matrix is PSD; then `gram(rows) = F` with
/// `rank = n_pos` rows in pivot order.
pub fn holomorphic_factor(f: &BihermitianForm) -> Result<Option<WeightedGramFactor>> {
    Ok(holomorphic_factor_certified(f)?.0)
}

pub fn holomorphic_factor_certified(
    f: &BihermitianForm,
) -> Result<(Option<WeightedGramFactor>, SignatureCertificate)> {
    let (m, basis) = bihomogeneous_matrix(f)?;
    let cert = ldl_signature(&m);
    let factor = cert
        .is_positive_semidefinite()
        .then(|| factor_from_certificate(f, &basis, &cert));
    Ok((factor, cert))
}

/// `Some` iff the coefficient matrix is positive definite, so the rows span all of
/// `C^r ⊗ V_m` (`s = N·r`).
pub fn strict_holomorphic_factor(f: &BihermitianForm) -> Result<Option<WeightedGramFactor>> {
    Ok(strict_holomorphic_factor_certified(f)?.0)
}

pub fn strict_holomorphic_factor_certified(
    f: &BihermitianForm,
) -> Result<(Option<WeightedGramFactor>, SignatureCertificate)> {
    let (m, basis) = bihomogeneous_matrix(f)?;
    let cert = ldl_signature(&m);
    let factor = cert
        .is_positive_definite()
        .then(|| factor_from_certificate(f, &basis, &cert));
    Ok((factor, cert))
}

/// Floating-point factor with `√a_k` absorbed into row `k`.
#[derive(Clone, Debug)]
pub struct NumericFactor {
    pub n: usize,
    pub r: usize,
    /// `rows[k][j]` lists the terms of `A_kj`.
    pub rows: Vec<Vec<Vec<(MultiIndex, Complex64)>>>,
}

impl NumericFactor {
    pub fn evaluate(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|terms| {
                        terms
                            .iter()
                            .map(|(a, c)| {
                                a.exponents()
                                    .iter()
                                    .zip(z)
                                    .fold(*c, |acc, (&e, x)| acc * x.powu(e))
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// `A(z)*·A(z)` as an `r×r` matrix.
    pub fn gram_at(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let a = self.evaluate(z);
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.r]; self.r];
        for row in &a {
            for i in 0..self.r {
                for j in 0..self.r {
                    out[i][j] += row[i].conj() * row[j];
                }
            }
        }
        out
    }

    /// Relative Frobenius error of `A(z)*·A(z)` against `target(z, z̄)`.
    pub fn relative_error(&self, target: &BihermitianForm, z: &[Complex64]) -> Result<f64> {
        let exact = target.evaluate(z, z)?;
        let approx = self.gram_at(z);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.r {
            for j in 0..self.r {
                num += (exact[i][j] - approx[i][j]).norm_sqr();
                den += exact[i][j].norm_sqr();
            }
        }
        Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
    }
}

fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Scales row `k` by `√a_k` and rounds coefficients to `digits` significant digits
/// (capped at 17, the precision of `f64`).
pub fn numeric_factor(w: &WeightedGramFactor, digits: usize) -> NumericFactor {
    let digits = digits.clamp(1, 17);
    let rows = (0..w.rows.s())
        .map(|k| {
            let scale = rational_to_f64(&w.rows.weight(k)).sqrt();
            w.rows
                .row(k)
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(a, c)| {
                            let v = c.to_complex64() * scale;
                            let v = Complex64::new(
                                round_significant(v.re, digits),
                                round_significant(v.im, digits),
                            );
                            (a.clone(), v)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    NumericFactor {
        n: w.rows.n(),
        r: w.rows.r(),
        rows,
    }
}
