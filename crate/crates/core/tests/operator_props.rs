mod common;

use common::*;
use holofactor::certify::{is_positive_definite, ldl_signature};
use holofactor::factor::WeightedGramFactor;
use holofactor::operator_link::{operator_matrix, operator_positive, pairing_identity_check};
use holofactor::scalar::ratio;
use holofactor::{BihermitianForm, GaussianRational};
use rand::Rng;

#[test]
fn coefficient_and_operator_verdicts_agree() {
    let mut rng = rng(30);
    for k in 0..200 {
        let (n, r, m) = random_shape(&mut rng);
        let kind = [Kind::Definite, Kind::Singular, Kind::Indefinite][k % 3];
        let f = mixed_form(&mut rng, n, r, m, kind);
        let (mat, _) = f.coefficient_matrix_at(m).unwrap();
        let (pd, c1) = is_positive_definite(&mat);
        let (op_pd, c2) = operator_positive(&f, m).unwrap();
        assert_eq!(pd, op_pd);
        assert_eq!((c1.n_pos, c1.n_neg, c1.n_zero), (c2.n_pos, c2.n_neg, c2.n_zero));
    }
}

#[test]
fn spanning_gram_forms_give_positive_operators() {
    let mut rng = rng(31);
    for _ in 0..100 {
        let (n, r, m) = random_shape(&mut rng);
        let size = basis_len(n, r, m);
        let a = random_holo_matrix(&mut rng, n, size, r, m, 1.0);
        let f = BihermitianForm::gram(&a);
        let (mat, _) = f.coefficient_matrix_at(m).unwrap();
        // A random square coefficient matrix is invertible almost surely; skip the rare exception.
        if !ldl_signature(&mat).is_positive_definite() {
            continue;
        }
        assert!(operator_positive(&f, m).unwrap().0);
    }
}

#[test]
fn pairing_identity_on_gram_instances() {
    let mut rng = rng(32);
    for _ in 0..60 {
        let (n, r, m) = random_shape(&mut rng);
        let s = rng.gen_range(1..=4);
        let rows = random_holo_matrix(&mut rng, n, s, r, m, 0.7);
        let weights = (0..s).map(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))).collect();
        let rows = rows.with_weights(weights).unwrap();
        let w = WeightedGramFactor {
            target: BihermitianForm::gram(&rows),
            rows,
        };
        for _ in 0..5 {
            let h: Vec<GaussianRational> = (0..basis_len(n, r, m)).map(|_| gaussian(&mut rng, 5)).collect();
            assert!(pairing_identity_check(&w, &h).unwrap());
        }
    }
}

#[test]
fn verdict_is_invariant_under_positive_reweighting() {
    let mut rng = rng(33);
    for k in 0..60 {
        let (n, r, m) = random_shape(&mut rng);
        let kind = [Kind::Definite, Kind::Singular, Kind::Indefinite][k % 3];
        let f = mixed_form(&mut rng, n, r, m, kind);
        let op = operator_matrix(&f, m).unwrap();
        let base = ldl_signature(&op.q);
        let weights: Vec<_> = (0..op.q.size()).map(|_| ratio(rng.gen_range(1..=20), rng.gen_range(1..=20))).collect();
        let other = ldl_signature(&op.q.scale_diagonal(&weights));
        assert_eq!(base.is_positive_definite(), other.is_positive_definite());
        assert_eq!((base.n_pos, base.n_neg), (other.n_pos, other.n_neg));
    }
}
