//! Multi-indices, canonical monomial bases and the exact combinatorial constants
//! attached to them.
//!
//! Every dense index in the crate goes through [`MonomialBasis`]: within a fixed
//! degree the monomials are listed in lexicographically descending order, so on
//! two variables of degree 2 the order is `z1^2, z1*z2, z2^2`.
//!
//! The ball constants are kept in reduced form. The squared L² norm of `z^α` on
//! the unit ball of `C^n` is `(π^n/n!) · α!·n!/(n+|α|)!`, and the coefficient of
//! `⟨z,w⟩^d` in the Bergman kernel is `(n!/π^n) · binom(n+d, n)`. The factors of
//! `π^n/n!` cancel from every positivity statement, so only the rational parts
//! are computed here.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Exponent vector `α` of a monomial `z^α` on `C^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector `e_k` (0-based `k`).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `α!` = product of the factorials of the entries.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, o: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), o.dim());
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// All multi-indices of length `n` and degree `m`, lexicographically descending.
pub fn enumerate_degree(n: usize, m: u32) -> Vec<MultiIndex> {
    assert!(n >= 1, "ambient dimension must be positive");
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill(&mut current, 0, m, &mut out);
    out
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill(current, pos + 1, remaining - a, out);
    }
}

/// `binom(n+m-1, m)`, the number of monomials of degree `m` in `n` variables.
pub fn dim_homogeneous(n: usize, m: u32) -> usize {
    assert!(n >= 1, "ambient dimension must be positive");
    let v = binomial(n as u64 + m as u64 - 1, m as u64);
    usize::try_from(v).expect("dimension overflows usize")
}

/// `d!/γ!`, the weight of `z^γ w̄^γ` in `⟨z,w⟩^d`.
pub fn multinomial(d: u32, gamma: &MultiIndex) -> Result<Rational> {
    if gamma.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: gamma.degree(),
        });
    }
    Ok(Rational::from_integer(factorial(d) / gamma.factorial()))
}

/// `p̃_α = α!·n!/(n+|α|)!`, the reduced squared L² norm of `z^α` on the unit ball.
pub fn monomial_norm_reduced(alpha: &MultiIndex) -> Rational {
    let n = alpha.dim() as u32;
    Rational::new(
        alpha.factorial() * factorial(n),
        factorial(n + alpha.degree()),
    )
}

/// `C̃_d = binom(n+d, n)`, the reduced coefficient of `⟨z,w⟩^d` in the Bergman kernel
/// `(1 - ⟨z,w⟩)^{-(n+1)}` of the unit ball.
pub fn bergman_coefficient_reduced(n: usize, d: u32) -> Rational {
    Rational::from_integer(binomial(n as u64 + d as u64, n as u64))
}

/// An ordered monomial basis with constant-time position lookup.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialBasis {
    n: usize,
    monomials: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    /// Degree-`m` monomials in canonical order.
    pub fn homogeneous(n: usize, m: u32) -> Self {
        Self::from_list(n, enumerate_degree(n, m))
    }

    /// All monomials of degree `0..=m`, graded ascending and lexicographically
    /// descending inside each degree.
    pub fn up_to(n: usize, m: u32) -> Self {
        let list = (0..=m).flat_map(|k| enumerate_degree(n, k)).collect();
        Self::from_list(n, list)
    }

    fn from_list(n: usize, monomials: Vec<MultiIndex>) -> Self {
        let position = monomials
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();
        MonomialBasis {
            n,
            monomials,
            position,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.position.get(alpha).copied()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn get(&self, k: usize) -> &MultiIndex {
        &self.monomials[k]
    }
}
