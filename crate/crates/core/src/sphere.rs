//! Exact rational points on the unit sphere of `C^n = R^{2n}`.

use num_traits::{One, Zero};

use crate::scalar::{GaussianRational, Rational};

/// Inverse stereographic projection of `t ∈ Q^{2n-1}` onto `S^{2n-1}`:
/// `x = (2t, |t|² - 1) / (|t|² + 1)`, paired as `z_k = x_{2k-1} + i·x_{2k}`.
pub fn point_from_params(t: &[Rational]) -> Vec<GaussianRational> {
    let norm: Rational = t.iter().map(|x| x * x).sum();
    let denom = &norm + Rational::one();
    let mut x: Vec<Rational> = t.iter().map(|v| (v + v) / &denom).collect();
    x.push((&norm - Rational::one()) / &denom);
    x.chunks(2)
        .map(|c| GaussianRational::new(c[0].clone(), c[1].clone()))
        .collect()
}

/// Deterministic sample: every `t` with entries in `{-1, 0, 1}` (capped at
/// `limit` points), plus the coordinate points `e_k` and `i·e_k`.
pub fn grid_points(n: usize, limit: usize) -> Vec<Vec<GaussianRational>> {
    let mut out = Vec::new();
    for k in 0..n {
        for unit in [GaussianRational::one(), GaussianRational::i()] {
            let mut z = vec![GaussianRational::zero(); n];
            z[k] = unit;
            out.push(z);
        }
    }
    let dims = 2 * n - 1;
    let total = 3usize.saturating_pow(dims as u32).min(limit);
    for code in 0..total {
        let mut c = code;
        let t: Vec<Rational> = (0..dims)
            .map(|_| {
                let digit = (c % 3) as i64 - 1;
                c /= 3;
                Rational::from_integer(digit.into())
            })
            .collect();
        out.push(point_from_params(&t));
    }
    out
}
