#![allow(dead_code)]

use holofactor::multiindex::enumerate_degree;
use holofactor::scalar::{rat, ratio};
use holofactor::{
    BihermitianForm, CoefficientBasis, GaussianRational, HermitianMatrix, HoloPoly, HoloPolyMatrix, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng, h: i64) -> Rational {
    if rng.gen_bool(0.7) {
        rat(rng.gen_range(-h..=h))
    } else {
        ratio(rng.gen_range(-h..=h), rng.gen_range(1..=4))
    }
}

pub fn gaussian(rng: &mut ChaCha8Rng, h: i64) -> GaussianRational {
    let re = small_rational(rng, h);
    let im = if rng.gen_bool(0.5) { small_rational(rng, h) } else { rat(0) };
    GaussianRational::new(re, im)
}

pub fn random_holo(rng: &mut ChaCha8Rng, n: usize, m: u32, density: f64) -> HoloPoly {
    let mut p = HoloPoly::zero(n);
    for alpha in enumerate_degree(n, m) {
        if rng.gen_bool(density) {
            p.add_term(alpha, gaussian(rng, 3));
        }
    }
    p
}

/// `s×r` matrix of degree-`m` homogeneous polynomials.
pub fn random_holo_matrix(rng: &mut ChaCha8Rng, n: usize, s: usize, r: usize, m: u32, density: f64) -> HoloPolyMatrix {
    let rows = (0..s)
        .map(|_| (0..r).map(|_| random_holo(rng, n, m, density)).collect())
        .collect();
    HoloPolyMatrix::from_rows(n, r, rows).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, size: usize, h: i64, density: f64) -> HermitianMatrix {
    HermitianMatrix::from_upper(size, |a, b| {
        if !rng.gen_bool(density) {
            GaussianRational::from_int(0)
        } else if a == b {
            GaussianRational::from_real(small_rational(rng, h))
        } else {
            gaussian(rng, h)
        }
    })
    .unwrap()
}

pub fn basis_len(n: usize, r: usize, m: u32) -> usize {
    CoefficientBasis::homogeneous(n, r, m).len()
}

/// Hermitian-symmetric bidegree-`(m, m)` form from a random coefficient matrix.
pub fn random_form(rng: &mut ChaCha8Rng, n: usize, r: usize, m: u32) -> BihermitianForm {
    let size = basis_len(n, r, m);
    let mat = random_hermitian(rng, size, 5, 0.6);
    BihermitianForm::from_coefficient_matrix(&mat, n, m, r).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Definite,
    Singular,
    Indefinite,
}

/// Mixed construction: `gram` of more rows than the basis size (definite),
/// `gram` of fewer rows (singular), or a random Hermitian coefficient matrix.
/// Never returns the zero form.
pub fn mixed_form(rng: &mut ChaCha8Rng, n: usize, r: usize, m: u32, kind: Kind) -> BihermitianForm {
    let size = basis_len(n, r, m);
    loop {
        let f = match kind {
            Kind::Definite => BihermitianForm::gram(&random_holo_matrix(rng, n, size + 1, r, m, 0.9)),
            Kind::Singular => {
                let s = rng.gen_range(1..size.max(2));
                BihermitianForm::gram(&random_holo_matrix(rng, n, s, r, m, 0.9))
            }
            Kind::Indefinite => random_form(rng, n, r, m),
        };
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_shape(rng: &mut ChaCha8Rng) -> (usize, usize, u32) {
    (rng.gen_range(1..=3), rng.gen_range(1..=2), rng.gen_range(1..=3))
}
