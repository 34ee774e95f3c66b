use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::{GaussianRational, Rational};

/// A holomorphic polynomial `Σ c_α z^α` on `C^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoloPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
}

impl HoloPoly {
    pub fn zero(n: usize) -> Self {
        HoloPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    pub fn monomial(alpha: MultiIndex, c: GaussianRational) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Accumulates `c·z^α`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, alpha: MultiIndex, c: GaussianRational) {
        assert_eq!(alpha.dim(), self.n, "multi-index length differs from n");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> GaussianRational {
        self.terms.get(alpha).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(m)` when every monomial has degree `m`; the zero polynomial has none.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(MultiIndex::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn evaluate(&self, z: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (alpha, c) in &self.terms {
            acc += &(c * &monomial_value(alpha, z));
        }
        acc
    }

    /// Formats with `z` names, or `dz` names for differential-operator output.
    pub fn format_with(&self, var: &str) -> String {
        let parts = self
            .terms
            .iter()
            .map(|(a, c)| (c.clone(), monomial_name(a, var)))
            .collect::<Vec<_>>();
        format_sum(&parts)
    }
}

pub(crate) fn monomial_value(alpha: &MultiIndex, z: &[GaussianRational]) -> GaussianRational {
    let mut acc = GaussianRational::one();
    for (k, &e) in alpha.exponents().iter().enumerate() {
        for _ in 0..e {
            acc *= &z[k];
        }
    }
    acc
}

/// `z1^2*z2`, or the empty string for the constant monomial.
pub(crate) fn monomial_name(alpha: &MultiIndex, var: &str) -> String {
    let mut parts = Vec::new();
    for (k, &e) in alpha.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{var}{}", k + 1)),
            _ => parts.push(format!("{var}{}^{e}", k + 1)),
        }
    }
    parts.join("*")
}

/// Joins `(coefficient, monomial)` pairs in the expression grammar.
pub(crate) fn format_sum(parts: &[(GaussianRational, String)]) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (c, mono)) in parts.iter().enumerate() {
        let negative_real = c.is_real() && c.re.is_negative();
        let (c, neg) = if negative_real && k > 0 {
            (-c, true)
        } else {
            (c.clone(), false)
        };
        if k > 0 {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono.clone()
        } else if (-&c).is_one() {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        };
        out.push_str(&body);
    }
    out
}

/// An `s×r` matrix of holomorphic polynomials, optionally carrying a positive
/// weight per row. With weights `a_k` the row `k` contributes `a_k·|A_k|²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoloPolyMatrix {
    n: usize,
    s: usize,
    r: usize,
    entries: Vec<HoloPoly>,
    weights: Option<Vec<Rational>>,
}

impl HoloPolyMatrix {
    pub fn zeros(n: usize, s: usize, r: usize) -> Self {
        HoloPolyMatrix {
            n,
            s,
            r,
            entries: vec![HoloPoly::zero(n); s * r],
            weights: None,
        }
    }

    /// Builds from rows; every row must have `r` entries on `C^n`.
    pub fn from_rows(n: usize, r: usize, rows: Vec<Vec<HoloPoly>>) -> Result<Self> {
        let s = rows.len();
        let mut entries = Vec::with_capacity(s * r);
        for row in rows {
            if row.len() != r {
                return Err(Error::ShapeMismatch(format!(
                    "row has {} entries, expected {r}",
                    row.len()
                )));
            }
            for p in row {
                if p.n() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: p.n(),
                    });
                }
                entries.push(p);
            }
        }
        Ok(HoloPolyMatrix {
            n,
            s,
            r,
            entries,
            weights: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != self.s {
            return Err(Error::DimensionMismatch {
                expected: self.s,
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::Format("row weights must be positive".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of columns.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, k: usize, j: usize) -> &HoloPoly {
        &self.entries[k * self.r + j]
    }

    pub fn get_mut(&mut self, k: usize, j: usize) -> &mut HoloPoly {
        &mut self.entries[k * self.r + j]
    }

    pub fn row(&self, k: usize) -> &[HoloPoly] {
        &self.entries[k * self.r..(k + 1) * self.r]
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, k: usize) -> Rational {
        self.weights
            .as_ref()
            .map(|w| w[k].clone())
            .unwrap_or_else(Rational::one)
    }

    /// `Some(m)` if all nonzero entries are homogeneous of the same degree `m`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degree = None;
        for p in self.entries.iter().filter(|p| !p.is_zero()) {
            let d = p.homogeneous_degree()?;
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        degree
    }

    pub fn evaluate(&self, z: &[GaussianRational]) -> Vec<Vec<GaussianRational>> {
        (0..self.s)
            .map(|k| self.row(k).iter().map(|p| p.evaluate(z)).collect())
            .collect()
    }
}
