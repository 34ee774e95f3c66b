mod common;

use common::*;
use holofactor::certify::ldl_signature;
use holofactor::multiindex::binomial;
use holofactor::scalar::{rat, ratio};
use holofactor::stabilize::{find_minimal_d, multiplier_power, multiplier_shift, Mode};
use holofactor::{BihermitianForm, GaussianRational, MultiIndex, Rational};
use num_traits::Zero;
use rand::Rng;

/// Product of factors `x² + b·xy + y²` (`b > -2`) with `x = |z1|²`, `y = |z2|²`:
/// positive away from the origin, typically with a negative coefficient.
fn positive_diagonal_form(rng: &mut rand_chacha::ChaCha8Rng) -> BihermitianForm {
    let mut coeffs = vec![rat(1)];
    for _ in 0..rng.gen_range(1..=2) {
        let b = ratio(rng.gen_range(-17..=10), 10);
        let factor = [rat(1), b, rat(1)];
        let mut next = vec![rat(0); coeffs.len() + 2];
        for (i, c) in coeffs.iter().enumerate() {
            for (j, f) in factor.iter().enumerate() {
                next[i + j] += c * f;
            }
        }
        coeffs = next;
    }
    diagonal_form(&coeffs)
}

/// `Σ_k c_k |z1|^{2(m-k)} |z2|^{2k}`.
fn diagonal_form(coeffs: &[Rational]) -> BihermitianForm {
    let m = coeffs.len() as u32 - 1;
    let mut f = BihermitianForm::zero(2, 1);
    for (k, c) in coeffs.iter().enumerate() {
        let a = MultiIndex::new(vec![m - k as u32, k as u32]);
        f.add_term(0, 0, a.clone(), a, GaussianRational::from_real(c.clone()));
    }
    f
}

#[test]
fn strict_success_persists_under_further_shifts() {
    let mut rng = rng(20);
    let mut found = 0;
    while found < 100 {
        let f = if found % 2 == 0 {
            positive_diagonal_form(&mut rng)
        } else {
            let (n, r, m) = random_shape(&mut rng);
            mixed_form(&mut rng, n, r, m, Kind::Definite)
        };
        let report = find_minimal_d(&f, Mode::Strict, 60).unwrap();
        let Some(d) = report.d_min else { continue };
        found += 1;
        let m = f.bidegree().unwrap();
        let mut g = multiplier_power(&f, d).unwrap();
        for extra in 1..=2 {
            g = multiplier_shift(&g).unwrap();
            let (mat, _) = g.coefficient_matrix_at(m + d + extra).unwrap();
            assert!(ldl_signature(&mat).is_positive_definite());
        }
    }
}

#[test]
fn semidefinite_success_persists_under_further_shifts() {
    let mut rng = rng(21);
    for _ in 0..100 {
        let (n, r, m) = random_shape(&mut rng);
        let f = mixed_form(&mut rng, n, r, m, Kind::Singular);
        let report = find_minimal_d(&f, Mode::Semi, 0).unwrap();
        assert_eq!(report.d_min, Some(0));
        let mut g = f.clone();
        for extra in 1..=2 {
            g = multiplier_shift(&g).unwrap();
            let (mat, _) = g.coefficient_matrix_at(m + extra).unwrap();
            assert!(ldl_signature(&mat).is_positive_semidefinite());
        }
    }
}

#[test]
fn power_equals_iterated_shift() {
    let mut rng = rng(22);
    for _ in 0..30 {
        let (n, r, m) = random_shape(&mut rng);
        let f = random_form(&mut rng, n, r, m);
        let mut g = f.clone();
        for d in 0..=6 {
            assert_eq!(multiplier_power(&f, d).unwrap(), g);
            if d < 6 {
                g = multiplier_shift(&g).unwrap();
            }
        }
    }
}

#[test]
fn diagonal_forms_follow_the_binomial_convolution() {
    let mut rng = rng(23);
    for _ in 0..40 {
        let m = rng.gen_range(0..=4);
        let coeffs: Vec<Rational> = (0..=m).map(|_| small_rational(&mut rng, 6)).collect();
        let f = diagonal_form(&coeffs);
        for d in 0..=6u32 {
            let g = multiplier_power(&f, d).unwrap();
            let (mat, basis) = g.coefficient_matrix_at(m as u32 + d).unwrap();
            assert!(mat.is_diagonal());
            for idx in 0..basis.len() {
                let k = basis.label(idx).1.exponents()[1] as i64;
                let mut expected = Rational::zero();
                for (j, c) in coeffs.iter().enumerate() {
                    let t = k - j as i64;
                    if (0..=d as i64).contains(&t) {
                        expected += c * Rational::from_integer(binomial(d as u64, t as u64));
                    }
                }
                assert_eq!(mat.get(idx, idx).re, expected);
            }
        }
    }
}
