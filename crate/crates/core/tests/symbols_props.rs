mod common;

use common::*;
use holofactor::certify::ldl_signature;
use holofactor::factor::strict_holomorphic_factor;
use holofactor::stabilize::multiplier_shift;
use holofactor::symbols::{certify_elliptic, complex_to_real, real_to_complex, RealSymbol};
use holofactor::{GaussianRational, Rational};
use rand::Rng;

fn random_symbol(rng: &mut rand_chacha::ChaCha8Rng, vars: usize, degree: u32) -> RealSymbol {
    let terms: Vec<(Vec<u32>, Rational)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let mut e = vec![0u32; vars];
            for _ in 0..degree {
                e[rng.gen_range(0..vars)] += 1;
            }
            (e, small_rational(rng, 5))
        })
        .collect();
    RealSymbol::from_terms(vars, terms).unwrap()
}

#[test]
fn conversion_is_multiplicative() {
    let mut rng = rng(50);
    for _ in 0..50 {
        let vars = 2 * rng.gen_range(1..=2);
        let deg = rng.gen_range(1..=3);
        let p = random_symbol(&mut rng, vars, deg);
        let deg = rng.gen_range(1..=3);
        let q = random_symbol(&mut rng, vars, deg);
        let lhs = real_to_complex(&p.mul(&q).unwrap()).unwrap();
        let rhs = real_to_complex(&p).unwrap().kernel_multiply(&real_to_complex(&q).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(complex_to_real(&lhs).unwrap(), p.mul(&q).unwrap());
    }
}

#[test]
fn pointwise_values_agree() {
    let mut rng = rng(51);
    for _ in 0..30 {
        let vars = 2 * rng.gen_range(1..=3);
        let deg = rng.gen_range(1..=4);
        let p = random_symbol(&mut rng, vars, deg);
        let f = real_to_complex(&p).unwrap();
        for _ in 0..5 {
            let xi: Vec<Rational> = (0..vars).map(|_| small_rational(&mut rng, 4)).collect();
            let z: Vec<GaussianRational> = xi.chunks(2).map(|c| GaussianRational::new(c[0].clone(), c[1].clone())).collect();
            let v = f.evaluate_exact(&z, &z).unwrap()[0][0].clone();
            assert_eq!(v, GaussianRational::from_real(p.evaluate(&xi).unwrap()));
        }
    }
}

#[test]
fn certified_symbols_stay_certified_and_match_strict_factors() {
    let mut rng = rng(52);
    let mut certified = 0;
    for k in 0..40 {
        let (n, _, m) = random_shape(&mut rng);
        let kind = [Kind::Definite, Kind::Singular, Kind::Indefinite][k % 3];
        let f = mixed_form(&mut rng, n, 1, m, kind);
        let Ok(p) = complex_to_real(&f) else { continue };
        let report = certify_elliptic(&p, 4).unwrap();
        let Some(d) = report.certified_d() else { continue };
        certified += 1;
        let e = report.e_matrix.clone().unwrap();
        assert!(ldl_signature(&e).is_positive_definite());
        // The certified q_d has a strict factor, and so does q_{d+1}.
        let q = report.factor.as_ref().unwrap().target.clone();
        assert!(strict_holomorphic_factor(&q).unwrap().is_some());
        let next = multiplier_shift(&q).unwrap();
        assert!(strict_holomorphic_factor(&next).unwrap().is_some());
        assert_eq!(q.bidegree(), Some(m + d));
    }
    assert!(certified > 5);
}
