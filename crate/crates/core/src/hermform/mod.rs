//! Matrix-valued polynomial kernels `F(z, w̄)` and holomorphic polynomial matrices.
//!
//! A [`BihermitianForm`] stores the sparse coefficients `F_{ijαβ}` of
//!
//! ```text
//! F_ij(z, w̄) = Σ F_{ijαβ} z^α w̄^β
//! ```
//!
//! with `i, j` zero-based internally (one-based in JSON and in the expression
//! grammar's bracketed matrices). Kernels built from a holomorphic matrix `A` follow
//! `F(z, w̄) = A(w)*·A(z)`, so `F_ij(z, w̄) = Σ_k A_kj(z)·conj(A_ki(w))`: the `z`
//! variables ride on the column index `j`.

mod holo;
mod matrix;
pub mod parse;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use holo::{HoloPoly, HoloPolyMatrix};
pub use matrix::HermitianMatrix;
pub use parse::{parse_expression, parse_form, parse_holo_matrix, Parsed};

use crate::error::{Error, Result};
use crate::multiindex::{MonomialBasis, MultiIndex};
use crate::scalar::GaussianRational;

pub(crate) use holo::{format_sum, monomial_name, monomial_value};

/// Key of one coefficient `F_{ijαβ}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TermKey {
    pub i: usize,
    pub j: usize,
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
}

/// Sparse `r×r` matrix of polynomials in `(z, w̄)` on `C^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BihermitianForm {
    n: usize,
    r: usize,
    terms: BTreeMap<TermKey, GaussianRational>,
}

impl BihermitianForm {
    pub fn zero(n: usize, r: usize) -> Self {
        assert!(n >= 1 && r >= 1, "form needs n >= 1 and r >= 1");
        BihermitianForm {
            n,
            r,
            terms: BTreeMap::new(),
        }
    }

    /// The constant scalar form `1`.
    pub fn one(n: usize) -> Self {
        let mut f = Self::zero(n, 1);
        f.add_term(0, 0, MultiIndex::zero(n), MultiIndex::zero(n), GaussianRational::one());
        f
    }

    /// `I_r` as a constant form.
    pub fn identity(n: usize, r: usize) -> Self {
        let mut f = Self::zero(n, r);
        for i in 0..r {
            f.add_term(i, i, MultiIndex::zero(n), MultiIndex::zero(n), GaussianRational::one());
        }
        f
    }

    /// `⟨z, w⟩ = Σ_k z_k w̄_k`.
    pub fn inner_product(n: usize) -> Self {
        let mut f = Self::zero(n, 1);
        for k in 0..n {
            f.add_term(0, 0, MultiIndex::unit(n, k), MultiIndex::unit(n, k), GaussianRational::one());
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulates `c·z^α w̄^β` into entry `(i, j)`.
    pub fn add_term(&mut self, i: usize, j: usize, alpha: MultiIndex, beta: MultiIndex, c: GaussianRational) {
        assert!(i < self.r && j < self.r, "entry index out of range");
        assert!(alpha.dim() == self.n && beta.dim() == self.n, "multi-index length differs from n");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(TermKey { i, j, alpha, beta }) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: usize, j: usize, alpha: &MultiIndex, beta: &MultiIndex) -> GaussianRational {
        self.terms
            .get(&TermKey {
                i,
                j,
                alpha: alpha.clone(),
                beta: beta.clone(),
            })
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// `F_{ijαβ} = conj(F_{jiβα})` for every stored coefficient, i.e. `F(z, z̄)` is
    /// Hermitian-matrix valued (real valued when `r = 1`).
    pub fn is_hermitian_symmetric(&self) -> bool {
        self.terms.iter().all(|(k, c)| {
            self.terms
                .get(&TermKey {
                    i: k.j,
                    j: k.i,
                    alpha: k.beta.clone(),
                    beta: k.alpha.clone(),
                })
                .is_some_and(|p| *p == c.conj())
        })
    }

    /// `Some(m)` when every term has `|α| = |β| = m`. The zero form has no bidegree.
    pub fn bidegree(&self) -> Option<u32> {
        let mut m = None;
        for k in self.terms.keys() {
            let (a, b) = (k.alpha.degree(), k.beta.degree());
            if a != b {
                return None;
            }
            match m {
                None => m = Some(a),
                Some(e) if e != a => return None,
                _ => {}
            }
        }
        m
    }

    /// Largest `|α|` or `|β|` over the support.
    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.alpha.degree().max(k.beta.degree()))
            .max()
            .unwrap_or(0)
    }

    /// Numeric value of `F(z, w̄)` as an `r×r` matrix.
    pub fn evaluate(&self, z: &[Complex64], w: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        self.check_point(z.len(), w.len())?;
        let wbar: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.r]; self.r];
        for (k, c) in &self.terms {
            let v = c.to_complex64() * float_monomial(&k.alpha, z) * float_monomial(&k.beta, &wbar);
            out[k.i][k.j] += v;
        }
        Ok(out)
    }

    /// Exact value of `F(z, w̄)` at Gaussian-rational points.
    pub fn evaluate_exact(&self, z: &[GaussianRational], w: &[GaussianRational]) -> Result<Vec<Vec<GaussianRational>>> {
        self.check_point(z.len(), w.len())?;
        let wbar: Vec<GaussianRational> = w.iter().map(GaussianRational::conj).collect();
        let mut out = vec![vec![GaussianRational::zero(); self.r]; self.r];
        for (k, c) in &self.terms {
            let v = &(c * &monomial_value(&k.alpha, z)) * &monomial_value(&k.beta, &wbar);
            out[k.i][k.j] += &v;
        }
        Ok(out)
    }

    fn check_point(&self, zl: usize, wl: usize) -> Result<()> {
        for len in [zl, wl] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: len,
                });
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.r != other.r {
            return Err(Error::ShapeMismatch(format!("{}x{} + {}x{}", self.r, self.r, other.r, other.r)));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.i, k.j, k.alpha.clone(), k.beta.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.n, self.r);
        for (k, v) in &self.terms {
            out.add_term(k.i, k.j, k.alpha.clone(), k.beta.clone(), v * c);
        }
        out
    }

    /// Product of kernels: `(F·G)(z, w̄)`, convolving the `z` and `w̄` exponents
    /// separately. At least one side must be scalar.
    pub fn kernel_multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let r = match (self.r, other.r) {
            (1, r) | (r, 1) => r,
            (a, b) => return Err(Error::ShapeMismatch(format!("kernel product of {a}x{a} and {b}x{b}"))),
        };
        let mut out = Self::zero(self.n, r);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let (i, j) = if self.r == 1 { (kb.i, kb.j) } else { (ka.i, ka.j) };
                out.add_term(i, j, &ka.alpha + &kb.alpha, &ka.beta + &kb.beta, ca * cb);
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// The Hermitian coefficient matrix on the degree-`m` basis of `C^r ⊗ V_m`.
    ///
    /// Rows and columns are indexed by `(j, α)` with `k = j·N + pos(α)`. The entry
    /// at `((j, α), (i, β))` is `F_{ijαβ}`, so a coefficient vector `H` gives
    /// `H*·M·H = Σ F_{ijαβ} H_{iβ} conj(H_{jα})`, and `F = gram(A)` produces
    /// `M = Σ_k a_k u_k u_k*` with `u_k` the coefficient vector of row `k` of `A`.
    pub fn coefficient_matrix(&self) -> Result<(HermitianMatrix, CoefficientBasis)> {
        let m = match self.bidegree() {
            Some(m) => m,
            None if self.is_zero() => 0,
            None => return Err(Error::NotBihomogeneous),
        };
        self.coefficient_matrix_at(m)
    }

    /// As [`coefficient_matrix`](Self::coefficient_matrix) with an explicit degree,
    /// so that the zero form can be given any size.
    pub fn coefficient_matrix_at(&self, m: u32) -> Result<(HermitianMatrix, CoefficientBasis)> {
        if !self.is_hermitian_symmetric() {
            return Err(Error::NotHermitianSymmetric);
        }
        let basis = CoefficientBasis::homogeneous(self.n, self.r, m);
        for k in self.terms.keys() {
            for d in [k.alpha.degree(), k.beta.degree()] {
                if d != m {
                    return Err(Error::DegreeMismatch { expected: m, found: d });
                }
            }
        }
        Ok((self.fill_matrix(&basis), basis))
    }

    /// Generalized mode: the basis is every monomial of degree `≤ max_degree`.
    pub fn coefficient_matrix_generalized(&self) -> Result<(HermitianMatrix, CoefficientBasis)> {
        if !self.is_hermitian_symmetric() {
            return Err(Error::NotHermitianSymmetric);
        }
        let basis = CoefficientBasis::up_to(self.n, self.r, self.max_degree());
        Ok((self.fill_matrix(&basis), basis))
    }

    fn fill_matrix(&self, basis: &CoefficientBasis) -> HermitianMatrix {
        let size = basis.len();
        let mut rows = vec![vec![GaussianRational::zero(); size]; size];
        for (k, c) in &self.terms {
            let row = basis.index(k.j, &k.alpha).expect("term outside basis");
            let col = basis.index(k.i, &k.beta).expect("term outside basis");
            rows[row][col] = c.clone();
        }
        HermitianMatrix::from_rows(rows).expect("hermitian-symmetric form gives a Hermitian matrix")
    }

    /// Inverse of [`coefficient_matrix`](Self::coefficient_matrix).
    pub fn from_coefficient_matrix(m: &HermitianMatrix, n: usize, degree: u32, r: usize) -> Result<Self> {
        Self::from_matrix_on(m, &CoefficientBasis::homogeneous(n, r, degree))
    }

    /// Inverse of [`coefficient_matrix_generalized`](Self::coefficient_matrix_generalized).
    pub fn from_coefficient_matrix_generalized(m: &HermitianMatrix, n: usize, max_degree: u32, r: usize) -> Result<Self> {
        Self::from_matrix_on(m, &CoefficientBasis::up_to(n, r, max_degree))
    }

    pub fn from_matrix_on(m: &HermitianMatrix, basis: &CoefficientBasis) -> Result<Self> {
        if m.size() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: m.size(),
            });
        }
        let mut f = Self::zero(basis.n(), basis.r());
        for row in 0..m.size() {
            let (j, alpha) = basis.label(row);
            for col in 0..m.size() {
                let (i, beta) = basis.label(col);
                f.add_term(i, j, alpha.clone(), beta.clone(), m.get(row, col).clone());
            }
        }
        Ok(f)
    }

    /// Kernel `F(z, w̄) = A(w)*·A(z)`, with row `k` weighted by `a_k` when `A` carries
    /// weights: `F_ij(z, w̄) = Σ_k a_k A_kj(z) conj(A_ki(w))`.
    pub fn gram(a: &HoloPolyMatrix) -> Self {
        let mut f = Self::zero(a.n(), a.r());
        for k in 0..a.s() {
            let weight = GaussianRational::from_real(a.weight(k));
            for j in 0..a.r() {
                for (alpha, c) in a.get(k, j).terms() {
                    let wc = &weight * c;
                    for i in 0..a.r() {
                        for (beta, e) in a.get(k, i).terms() {
                            f.add_term(i, j, alpha.clone(), beta.clone(), &wc * &e.conj());
                        }
                    }
                }
            }
        }
        f
    }

    fn entry_string(&self, i: usize, j: usize) -> String {
        let parts: Vec<(GaussianRational, String)> = self
            .terms
            .iter()
            .filter(|(k, _)| k.i == i && k.j == j)
            .map(|(k, c)| {
                let z = monomial_name(&k.alpha, "z");
                let w = monomial_name(&k.beta, "zb");
                let mono = match (z.is_empty(), w.is_empty()) {
                    (true, _) => w,
                    (_, true) => z,
                    _ => format!("{z}*{w}"),
                };
                (c.clone(), mono)
            })
            .collect();
        format_sum(&parts)
    }
}

/// Prints in the expression grammar. The conjugate variable `zb_k` stands for `w̄_k`.
impl fmt::Display for BihermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            return write!(f, "{}", self.entry_string(0, 0));
        }
        write!(f, "[")?;
        for i in 0..self.r {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.r {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry_string(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn float_monomial(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    alpha
        .exponents()
        .iter()
        .zip(z)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, x)| acc * x.powu(e))
}

/// Index set `C^r ⊗ (monomials)` of a coefficient matrix, component-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoefficientBasis {
    r: usize,
    monomials: MonomialBasis,
    generalized: bool,
}

impl CoefficientBasis {
    pub fn homogeneous(n: usize, r: usize, m: u32) -> Self {
        CoefficientBasis {
            r,
            monomials: MonomialBasis::homogeneous(n, m),
            generalized: false,
        }
    }

    pub fn up_to(n: usize, r: usize, m: u32) -> Self {
        CoefficientBasis {
            r,
            monomials: MonomialBasis::up_to(n, m),
            generalized: true,
        }
    }

    pub fn n(&self) -> usize {
        self.monomials.n()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }

    pub fn monomials(&self) -> &MonomialBasis {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.r * self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, component: usize, alpha: &MultiIndex) -> Option<usize> {
        self.monomials
            .position(alpha)
            .map(|p| component * self.monomials.len() + p)
    }

    /// `(component, α)` of a combined index.
    pub fn label(&self, k: usize) -> (usize, &MultiIndex) {
        let n_mono = self.monomials.len();
        (k / n_mono, self.monomials.get(k % n_mono))
    }

    /// Human-readable labels, e.g. `z1^2` or `[2] z1*z2` when `r > 1`.
    pub fn describe(&self) -> Vec<String> {
        (0..self.len())
            .map(|k| {
                let (c, a) = self.label(k);
                let name = monomial_name(a, "z");
                let name = if name.is_empty() { "1".to_string() } else { name };
                if self.r == 1 {
                    name
                } else {
                    format!("[{}] {name}", c + 1)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn form(text: &str) -> BihermitianForm {
        parse_form(text, None).unwrap()
    }

    fn f_c(c: i64) -> BihermitianForm {
        form(&format!("z1^2*zb1^2 + {c}*z1*z2*zb1*zb2 + z2^2*zb2^2"))
    }

    fn diag(v: &[i64]) -> HermitianMatrix {
        HermitianMatrix::diagonal(&v.iter().map(|&x| rat(x)).collect::<Vec<Rational>>())
    }

    #[test]
    fn hermitian_symmetry_examples() {
        assert!(form("z1^2*zb1^2 + z2^2*zb2^2").is_hermitian_symmetric());
        assert!(!form("z1*zb2").is_hermitian_symmetric());
        assert!(form("z1*zb2 + z2*zb1").is_hermitian_symmetric());
        assert!(form("(1/2 + 3/4*i)*z1*zb2 + (1/2 - 3/4*i)*z2*zb1").is_hermitian_symmetric());
        assert!(!form("i*z1*zb1").is_hermitian_symmetric());
    }

    #[test]
    fn bidegree_examples() {
        assert_eq!(f_c(3).bidegree(), Some(2));
        assert_eq!(form("z1*zb1 + z1^2*zb1^2").bidegree(), None);
        assert_eq!(form("1").bidegree(), Some(0));
        assert_eq!(form("z1^2*zb1").bidegree(), None);
    }

    #[test]
    fn evaluate_examples() {
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let v = f_c(5).evaluate(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(v[0][0], c(1.0, 0.0));
        let eq5 = form("z1^2*zb1^2 - 2*z1*z2*zb1*zb2 + z2^2*zb2^2");
        for t in [0.3, -1.7, 2.5] {
            let p = [c(t, 0.4 * t), c(t, 0.4 * t)];
            assert!(eq5.evaluate(&p, &p).unwrap()[0][0].norm() < 1e-12);
        }
        let zero = [c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(f_c(1).evaluate(&zero, &zero).unwrap()[0][0], c(0.0, 0.0));
        assert!(matches!(f_c(1).evaluate(&[c(1.0, 0.0)], &zero), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gram_examples() {
        let col = parse_holo_matrix("[[z1^2], [z2^2]]", None).unwrap();
        assert_eq!(BihermitianForm::gram(&col), form("z1^2*zb1^2 + z2^2*zb2^2"));
        let one = parse_holo_matrix("[[1]]", Some(2)).unwrap();
        assert_eq!(BihermitianForm::gram(&one), BihermitianForm::one(2));
        let lin = parse_holo_matrix("[[z1], [z2]]", None).unwrap();
        assert_eq!(BihermitianForm::gram(&lin), BihermitianForm::inner_product(2));
        let weighted = parse_holo_matrix("[[z1]]", Some(1)).unwrap().with_weights(vec![rat(3)]).unwrap();
        assert_eq!(BihermitianForm::gram(&weighted), form("3*z1*zb1"));
    }

    #[test]
    fn gram_uses_column_index_for_z() {
        let a = parse_holo_matrix("[[z1, i*z2]]", None).unwrap();
        let f = BihermitianForm::gram(&a);
        assert!(f.is_hermitian_symmetric());
        // F_01 = A_01(z)·conj(A_00(w)) = i·z2·w̄1
        assert_eq!(f.coefficient(0, 1, &mi(&[0, 1]), &mi(&[1, 0])), GaussianRational::i());
    }

    #[test]
    fn coefficient_matrix_examples() {
        let (m, basis) = f_c(7).coefficient_matrix().unwrap();
        assert_eq!(m, diag(&[1, 7, 1]));
        assert_eq!(basis.describe(), vec!["z1^2", "z1*z2", "z2^2"]);
        let eq5 = form("z1^2*zb1^2 - 2*z1*z2*zb1*zb2 + z2^2*zb2^2");
        assert_eq!(eq5.coefficient_matrix().unwrap().0, diag(&[1, -2, 1]));
        let ip = BihermitianForm::inner_product(2);
        let sq = ip.kernel_multiply(&ip).unwrap();
        assert_eq!(sq.coefficient_matrix().unwrap().0, diag(&[1, 2, 1]));
        assert_eq!(form("z1*zb2").coefficient_matrix().unwrap_err(), Error::NotHermitianSymmetric);
        assert_eq!(form("z1*zb1 + z1^2*zb1^2").coefficient_matrix().unwrap_err(), Error::NotBihomogeneous);
    }

    #[test]
    fn from_coefficient_matrix_examples() {
        let f = BihermitianForm::from_coefficient_matrix(&HermitianMatrix::identity(2), 2, 1, 1).unwrap();
        assert_eq!(f, BihermitianForm::inner_product(2));
        let f = BihermitianForm::from_coefficient_matrix(&diag(&[1, -4, 1]), 2, 2, 1).unwrap();
        assert_eq!(f, f_c(-4));
        let z = BihermitianForm::from_coefficient_matrix(&HermitianMatrix::zeros(3), 2, 2, 1).unwrap();
        assert!(z.is_zero());
        assert!(BihermitianForm::from_coefficient_matrix(&HermitianMatrix::zeros(2), 2, 2, 1).is_err());
    }

    #[test]
    fn kernel_multiply_examples() {
        let ip = BihermitianForm::inner_product(2);
        let sq = ip.kernel_multiply(&ip).unwrap();
        assert_eq!(sq.coefficient(0, 0, &mi(&[1, 1]), &mi(&[1, 1])), GaussianRational::from_int(2));
        let f = f_c(3);
        assert_eq!(BihermitianForm::one(2).kernel_multiply(&f).unwrap(), f);
        let ex = form("z1^2*zb1^2 + z2^2*zb2^2");
        let shifted = ip.kernel_multiply(&ex).unwrap();
        assert_eq!(shifted.coefficient_matrix().unwrap().0, HermitianMatrix::identity(4));
        let m2 = BihermitianForm::identity(2, 2);
        assert!(m2.kernel_multiply(&m2).is_err());
        assert!(ip.kernel_multiply(&BihermitianForm::one(3)).is_err());
    }

    #[test]
    fn generalized_matrix_round_trip() {
        let f = form("z1*zb1 + z1^2*zb1^2 + 2*z1 + 2*zb1 + (1 + i)*z1*zb2^2 + (1 - i)*z2^2*zb1");
        let (m, basis) = f.coefficient_matrix_generalized().unwrap();
        assert!(basis.is_generalized());
        assert_eq!(m.size(), 6);
        let back = BihermitianForm::from_coefficient_matrix_generalized(&m, 2, 2, 1).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn matrix_valued_round_trip() {
        let f = form("[[z1*zb1, (2 - i)*z1*zb2], [(2 + i)*z2*zb1, z2*zb2 + z1*zb1]]");
        assert_eq!(f.r(), 2);
        assert!(f.is_hermitian_symmetric());
        let (m, _) = f.coefficient_matrix().unwrap();
        assert_eq!(m.size(), 4);
        assert_eq!(BihermitianForm::from_coefficient_matrix(&m, 2, 1, 2).unwrap(), f);
    }
}
