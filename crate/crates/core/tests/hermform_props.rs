mod common;

use common::*;
use holofactor::hermform::parse_form;
use holofactor::multiindex::MonomialBasis;
use holofactor::{BihermitianForm, GaussianRational, HoloPolyMatrix};
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

/// Row `k` of `G` lists the coefficients of row `k` of `A` in the canonical basis.
fn coefficient_rows(a: &HoloPolyMatrix, m: u32) -> Vec<Vec<GaussianRational>> {
    let basis = holofactor::CoefficientBasis::homogeneous(a.n(), a.r(), m);
    (0..a.s())
        .map(|k| {
            (0..basis.len())
                .map(|idx| {
                    let (j, alpha) = basis.label(idx);
                    a.get(k, j).coefficient(alpha)
                })
                .collect()
        })
        .collect()
}

#[test]
fn gram_matches_coefficient_product() {
    let mut rng = rng(1);
    for _ in 0..60 {
        let (n, r, m) = random_shape(&mut rng);
        let s = rng.gen_range(1..=4);
        let a = random_holo_matrix(&mut rng, n, s, r, m, 0.7);
        let f = BihermitianForm::gram(&a);
        let (mat, _) = f.coefficient_matrix_at(m).unwrap();
        let g = coefficient_rows(&a, m);
        let size = mat.size();
        for p in 0..size {
            for q in 0..size {
                // Rows ride on z: M = Gᵀ·conj(G), the transpose of G*·G.
                let mut acc = GaussianRational::zero();
                for row in &g {
                    acc += &(&row[p] * &row[q].conj());
                }
                assert_eq!(mat.get(p, q), &acc);
            }
        }
        let (psd, _) = holofactor::certify::is_positive_semidefinite(&mat);
        assert!(psd);
    }
}

#[test]
fn coefficient_matrix_round_trip() {
    let mut rng = rng(2);
    for _ in 0..60 {
        let (n, r, m) = random_shape(&mut rng);
        let f = random_form(&mut rng, n, r, m);
        let (mat, _) = f.coefficient_matrix_at(m).unwrap();
        assert_eq!(BihermitianForm::from_coefficient_matrix(&mat, n, m, r).unwrap(), f);
        let (gen, basis) = f.coefficient_matrix_generalized().unwrap();
        assert!(basis.is_generalized());
        assert_eq!(BihermitianForm::from_matrix_on(&gen, &basis).unwrap(), f);
    }
}

#[test]
fn evaluation_matches_quadratic_form() {
    let mut rng = rng(3);
    for _ in 0..40 {
        let (n, r, m) = random_shape(&mut rng);
        let f = random_form(&mut rng, n, r, m);
        let (mat, basis) = f.coefficient_matrix_at(m).unwrap();
        let monomials = MonomialBasis::homogeneous(n, m);
        let z: Vec<GaussianRational> = (0..n).map(|_| gaussian(&mut rng, 4)).collect();
        let w: Vec<GaussianRational> = (0..n).map(|_| gaussian(&mut rng, 4)).collect();
        let value = f.evaluate_exact(&z, &w).unwrap();
        let zpow: Vec<GaussianRational> = monomials.monomials().iter().map(|a| pow(&z, a.exponents())).collect();
        let wpow: Vec<GaussianRational> = monomials.monomials().iter().map(|a| pow(&w, a.exponents())).collect();
        for i in 0..r {
            for j in 0..r {
                let mut acc = GaussianRational::zero();
                for (a, za) in zpow.iter().enumerate() {
                    for (b, wb) in wpow.iter().enumerate() {
                        let p = basis.index(j, monomials.get(a)).unwrap();
                        let q = basis.index(i, monomials.get(b)).unwrap();
                        acc += &(&(mat.get(p, q) * za) * &wb.conj());
                    }
                }
                assert_eq!(value[i][j], acc);
            }
        }
        if r == 1 {
            // F(z, z̄) as the quadratic form at the conjugated monomial vector.
            let u: Vec<GaussianRational> = zpow.iter().map(GaussianRational::conj).collect();
            let at_diag = f.evaluate_exact(&z, &z).unwrap()[0][0].clone();
            assert_eq!(at_diag, GaussianRational::from_real(mat.quadratic_form(&u)));
        }
    }
}

fn pow(z: &[GaussianRational], e: &[u32]) -> GaussianRational {
    let mut acc = GaussianRational::from_int(1);
    for (x, &k) in z.iter().zip(e) {
        for _ in 0..k {
            acc = &acc * x;
        }
    }
    acc
}

#[test]
fn hermitian_symmetric_forms_evaluate_to_hermitian_matrices() {
    let mut rng = rng(4);
    let forms: Vec<BihermitianForm> = (0..10)
        .map(|_| {
            let (n, r, m) = random_shape(&mut rng);
            random_form(&mut rng, n, r, m)
        })
        .collect();
    for f in &forms {
        assert!(f.is_hermitian_symmetric());
        for _ in 0..50 {
            let z: Vec<GaussianRational> = (0..f.n()).map(|_| gaussian(&mut rng, 3)).collect();
            let exact = f.evaluate_exact(&z, &z).unwrap();
            let zf: Vec<Complex64> = z.iter().map(GaussianRational::to_complex64).collect();
            let approx = f.evaluate(&zf, &zf).unwrap();
            for i in 0..f.r() {
                for j in 0..f.r() {
                    assert_eq!(exact[i][j], exact[j][i].conj());
                    let scale = 1.0 + approx[i][j].norm();
                    assert!((approx[i][j] - approx[j][i].conj()).norm() <= 1e-9 * scale);
                }
            }
        }
    }
}

#[test]
fn printed_forms_parse_back() {
    let mut rng = rng(5);
    for _ in 0..40 {
        let (n, r, m) = random_shape(&mut rng);
        let f = random_form(&mut rng, n, r, m);
        assert_eq!(parse_form(&f.to_string(), Some(n)).unwrap(), f);
        let json = holofactor::serial::form_to_json(&f);
        assert_eq!(holofactor::serial::form_from_json(&json).unwrap(), f);
    }
}
