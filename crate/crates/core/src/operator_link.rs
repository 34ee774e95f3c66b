//! The integral operator `T_F` on `C^r ⊗ V_d` with the Bergman-type kernel
//! `C_d ⟨z,w⟩^d`. In the monomial basis its matrix is `Q = D_p·M·D_p`, where `M` is
//! the coefficient matrix and `D_p` the diagonal of monomial norms `p̃_α`. Since
//! `D_p` is positive diagonal, `Q` and `M` are congruent and share their inertia.

use num_traits::{One, Zero};

use crate::certify::{ldl_signature, SignatureCertificate};
use crate::error::{Error, Result};
use crate::factor::WeightedGramFactor;
use crate::hermform::{BihermitianForm, CoefficientBasis, HermitianMatrix};
use crate::multiindex::{bergman_coefficient_reduced, enumerate_degree, monomial_norm_reduced, multinomial};
use crate::scalar::{GaussianRational, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorMatrix {
    pub q: HermitianMatrix,
    /// `p̃_α` for every basis index.
    pub weights: Vec<Rational>,
    pub basis: CoefficientBasis,
}

fn norm_weights(basis: &CoefficientBasis) -> Vec<Rational> {
    (0..basis.len())
        .map(|k| monomial_norm_reduced(basis.label(k).1))
        .collect()
}

/// `Q = D_p·M·D_p` for a form of bidegree `(d, d)`.
pub fn operator_matrix(f: &BihermitianForm, d: u32) -> Result<OperatorMatrix> {
    if !f.is_hermitian_symmetric() {
        return Err(Error::NotHermitianSymmetric);
    }
    match f.bidegree() {
        Some(m) if m != d => return Err(Error::DegreeMismatch { expected: d, found: m }),
        None if !f.is_zero() => return Err(Error::NotBihomogeneous),
        _ => {}
    }
    let (m, basis) = f.coefficient_matrix_at(d)?;
    let weights = norm_weights(&basis);
    Ok(OperatorMatrix {
        q: m.scale_diagonal(&weights),
        weights,
        basis,
    })
}

/// Whether `T_F` is positive definite, with the certificate for `Q`.
pub fn operator_positive(f: &BihermitianForm, d: u32) -> Result<(bool, SignatureCertificate)> {
    let op = operator_matrix(f, d)?;
    let cert = ldl_signature(&op.q);
    Ok((cert.is_positive_definite(), cert))
}

/// Checks `h*·Q·h = Σ_k a_k |Σ_{j,α} A_{kj,α}·conj(h_{jα})·p̃_α|²` exactly, with
/// the left side from the operator matrix of `w.target` and the right side
/// computed directly from the weighted rows.
pub fn pairing_identity_check(w: &WeightedGramFactor, h: &[GaussianRational]) -> Result<bool> {
    let d = w.target.bidegree().unwrap_or(0);
    let op = operator_matrix(&w.target, d)?;
    if h.len() != op.basis.len() {
        return Err(Error::DimensionMismatch {
            expected: op.basis.len(),
            found: h.len(),
        });
    }
    let lhs = op.q.quadratic_form(h);
    let mut rhs = Rational::zero();
    for k in 0..w.rows.s() {
        let mut inner = GaussianRational::zero();
        for (j, poly) in w.rows.row(k).iter().enumerate() {
            for (alpha, c) in poly.terms() {
                let idx = op.basis.index(j, alpha).ok_or(Error::DegreeMismatch {
                    expected: d,
                    found: alpha.degree(),
                })?;
                inner += &(c * &h[idx].conj()).scale(&op.weights[idx]);
            }
        }
        rhs += w.rows.weight(k) * inner.norm_sqr();
    }
    Ok(lhs == rhs)
}

/// `C̃_d · d!/α! · p̃_α = 1` for every `|α| = d`.
pub fn reproducing_check(n: usize, d: u32) -> bool {
    let c = bergman_coefficient_reduced(n, d);
    enumerate_degree(n, d).iter().all(|alpha| {
        multinomial(d, alpha)
            .map(|m| &c * m * monomial_norm_reduced(alpha) == Rational::one())
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::holomorphic_factor;
    use crate::hermform::parse_form;
    use crate::scalar::{rat, ratio};

    #[test]
    fn inner_product_operator() {
        let ip = BihermitianForm::inner_product(2);
        let op = operator_matrix(&ip, 1).unwrap();
        assert_eq!(op.q, HermitianMatrix::diagonal(&[ratio(1, 9), ratio(1, 9)]));
        assert!(operator_positive(&ip, 1).unwrap().0);
        assert_eq!(operator_matrix(&ip, 2).unwrap_err(), Error::DegreeMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn eq5_operator_is_indefinite() {
        let f = parse_form("(z1*zb1 - z2*zb2)^2", None).unwrap();
        let (pos, cert) = operator_positive(&f, 2).unwrap();
        assert!(!pos);
        assert_eq!((cert.n_pos, cert.n_neg, cert.n_zero), (2, 1, 0));
    }

    #[test]
    fn pairing_identity_for_f2() {
        let f = parse_form("z1^2*zb1^2 + 2*z1*z2*zb1*zb2 + z2^2*zb2^2", None).unwrap();
        let w = holomorphic_factor(&f).unwrap().unwrap();
        for k in 0..20i64 {
            let h = vec![
                GaussianRational::new(ratio(k, 3), ratio(1 - k, 5)),
                GaussianRational::new(ratio(2 * k + 1, 7), rat(k % 3)),
                GaussianRational::new(ratio(-k, 2), ratio(k * k, 11)),
            ];
            assert!(pairing_identity_check(&w, &h).unwrap());
        }
        assert!(pairing_identity_check(&w, &[GaussianRational::one()]).is_err());
    }

    #[test]
    fn reproducing_identity() {
        for n in 1..=4 {
            for d in 0..=8 {
                assert!(reproducing_check(n, d));
            }
        }
    }
}
