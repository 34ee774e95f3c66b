//! Constant-coefficient principal symbols on `R^{2n}` and their complex form.
//!
//! A real symbol `p(ξ)` in `ξ_1..ξ_{2n}` becomes a polynomial in `z, z̄` through
//! `x_j = (z_j + z̄_j)/2`, `y_j = (z_j − z̄_j)/(2i)` with `ξ_{2j−1} ↔ x_j` and
//! `ξ_{2j} ↔ y_j`. When the result is bihomogeneous, ellipticity (`p > 0` away
//! from the origin) is certified by a strict factorization of `||z||^{2d}·p`.
//!
//! Other Fourier conventions rescale a symbol by a positive constant, which
//! changes no verdict.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factor::WeightedGramFactor;
use crate::hermform::parse::{parse_raw, RawPoly, VarKind};
use crate::hermform::{format_sum, monomial_name, BihermitianForm, HermitianMatrix};
use crate::multiindex::MultiIndex;
use crate::scalar::{GaussianRational, Rational};
use crate::sphere::grid_points;
use crate::stabilize::{find_minimal_d, Mode, StabilizationReport};

/// Real polynomial in `2n` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealSymbol {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl RealSymbol {
    pub fn zero(num_vars: usize) -> Result<Self> {
        if !num_vars.is_multiple_of(2) {
            return Err(Error::OddVariableCount(num_vars));
        }
        Ok(RealSymbol {
            num_vars,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = RealSymbol::zero(num_vars)?;
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.num_vars / 2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// Total degree when homogeneous and nonzero.
    pub fn order(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn evaluate(&self, xi: &[Rational]) -> Result<Rational> {
        if xi.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: xi.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(xi)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let mut out = RealSymbol::zero(self.num_vars)?;
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RealSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<(GaussianRational, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| (GaussianRational::from_real(c.clone()), monomial_name(&MultiIndex::new(e.clone()), "x")))
            .collect();
        f.write_str(&format_sum(&parts))
    }
}

/// Sparse polynomial used during substitution.
type Expansion = BTreeMap<Vec<u32>, GaussianRational>;

fn expansion_mul(a: &Expansion, b: &Expansion) -> Expansion {
    let mut out = Expansion::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(GaussianRational::zero);
            *entry += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn expansion_pow(base: &Expansion, k: u32, vars: usize) -> Expansion {
    let mut out = Expansion::new();
    out.insert(vec![0; vars], GaussianRational::one());
    for _ in 0..k {
        out = expansion_mul(&out, base);
    }
    out
}

fn linear(vars: usize, coeffs: &[(usize, GaussianRational)]) -> Expansion {
    coeffs
        .iter()
        .map(|(v, c)| {
            let mut e = vec![0; vars];
            e[*v] = 1;
            (e, c.clone())
        })
        .collect()
}

/// Substitutes every variable by its linear image and expands.
fn substitute(monomials: impl Iterator<Item = (Vec<u32>, GaussianRational)>, images: &[Expansion], vars: usize) -> Expansion {
    let mut out = Expansion::new();
    for (e, c) in monomials {
        let mut term = Expansion::new();
        term.insert(vec![0; vars], c);
        for (v, &k) in e.iter().enumerate() {
            if k > 0 {
                term = expansion_mul(&term, &expansion_pow(&images[v], k, vars));
            }
        }
        for (m, c) in term {
            let entry = out.entry(m).or_insert_with(GaussianRational::zero);
            *entry += &c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The complex form of `p` as a scalar kernel (`r = 1`), not necessarily bihomogeneous.
pub fn real_to_complex(p: &RealSymbol) -> Result<BihermitianForm> {
    if !p.num_vars.is_multiple_of(2) {
        return Err(Error::OddVariableCount(p.num_vars));
    }
    let n = p.n();
    // Variables of the image: z_1..z_n then zb_1..zb_n.
    let half = GaussianRational::from_real(Rational::new(1.into(), 2.into()));
    let half_i = GaussianRational::new(Rational::zero(), Rational::new(1.into(), 2.into()));
    let mut images = Vec::with_capacity(2 * n);
    for j in 0..n {
        images.push(linear(2 * n, &[(j, half.clone()), (n + j, half.clone())]));
        images.push(linear(2 * n, &[(j, -half_i.clone()), (n + j, half_i.clone())]));
    }
    let expanded = substitute(
        p.terms.iter().map(|(e, c)| (e.clone(), GaussianRational::from_real(c.clone()))),
        &images,
        2 * n,
    );
    let mut f = BihermitianForm::zero(n.max(1), 1);
    for (e, c) in expanded {
        let alpha = MultiIndex::new(e[..n].to_vec());
        let beta = MultiIndex::new(e[n..].to_vec());
        f.add_term(0, 0, alpha, beta, c);
    }
    Ok(f)
}

/// Inverse of [`real_to_complex`] via `z_j = x_j + i·y_j`.
pub fn complex_to_real(f: &BihermitianForm) -> Result<RealSymbol> {
    if f.r() != 1 {
        return Err(Error::ShapeMismatch(format!("symbols are scalar, got a {}x{} kernel", f.r(), f.r())));
    }
    if !f.is_hermitian_symmetric() {
        return Err(Error::NotRealValued);
    }
    let n = f.n();
    let one = GaussianRational::one();
    let i = GaussianRational::i();
    let mut images = Vec::with_capacity(2 * n);
    for j in 0..n {
        images.push(linear(2 * n, &[(2 * j, one.clone()), (2 * j + 1, i.clone())]));
    }
    for j in 0..n {
        images.push(linear(2 * n, &[(2 * j, one.clone()), (2 * j + 1, -i.clone())]));
    }
    let monomials = f.terms().map(|(key, c)| {
        let mut e = key.alpha.exponents().to_vec();
        e.extend_from_slice(key.beta.exponents());
        (e, c.clone())
    });
    let expanded = substitute(monomials, &images, 2 * n);
    let mut terms = Vec::with_capacity(expanded.len());
    for (e, c) in expanded {
        if !c.is_real() {
            return Err(Error::NotRealValued);
        }
        terms.push((e, c.re));
    }
    RealSymbol::from_terms(2 * n, terms)
}

/// Circle invariance (`|α| = |β|` in every term) together with real homogeneity.
pub fn is_complex_bihomogeneous(f: &BihermitianForm) -> bool {
    let mut degree = None;
    for (key, _) in f.terms() {
        let (a, b) = (key.alpha.degree(), key.beta.degree());
        if a != b || degree.is_some_and(|d| d != a + b) {
            return false;
        }
        degree = Some(a + b);
    }
    degree.is_some()
}

/// Parses a symbol written in `x1..x_{2n}` or in `z`, `zb`. Without `n`, the
/// number of real variables is the largest `x` index rounded up to even.
pub fn parse_symbol(text: &str, n: Option<usize>) -> Result<RealSymbol> {
    let raw = parse_raw(text, &[VarKind::Z, VarKind::Zb, VarKind::X], None)?;
    if raw.rows.len() != 1 || raw.rows[0].len() != 1 {
        return Err(Error::ShapeMismatch("symbols are scalar".into()));
    }
    let poly = &raw.rows[0][0];
    let uses_x = raw.uses(VarKind::X);
    let uses_z = raw.uses(VarKind::Z) || raw.uses(VarKind::Zb);
    if uses_x && uses_z {
        return Err(Error::Parse {
            position: 0,
            message: "cannot mix x variables with z or zb".into(),
        });
    }
    if uses_z {
        let dims = raw.max_index(VarKind::Z).max(raw.max_index(VarKind::Zb));
        let n = check_limit(n, dims, "z")?;
        let form = crate::hermform::parse_form(text, Some(n))?;
        return complex_to_real(&form);
    }
    let count = raw.max_index(VarKind::X);
    let vars = match n {
        Some(n) => {
            check_limit(Some(2 * n), count, "x")?;
            2 * n
        }
        None => (count + count % 2).max(2),
    };
    let mut terms = Vec::with_capacity(poly.terms.len());
    for (m, c) in &poly.terms {
        if !c.is_real() {
            return Err(Error::NotRealValued);
        }
        terms.push((RawPoly::exponents(m, VarKind::X, vars), c.re.clone()));
    }
    RealSymbol::from_terms(vars, terms)
}

fn check_limit(limit: Option<usize>, used: usize, prefix: &str) -> Result<usize> {
    match limit {
        Some(l) if used > l => Err(Error::UnknownVariable {
            name: format!("{prefix}{used}"),
            position: 0,
        }),
        Some(l) => Ok(l),
        None => Ok(used.max(1)),
    }
}

/// Outcome of [`certify_elliptic`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EllipticVerdict {
    /// `||z||^{2d}·p` has a positive definite coefficient matrix.
    Certified { d: u32 },
    /// No certificate up to `d_max`, and no sampled point refutes positivity.
    NotCertified { d_max: u32 },
    /// A sampled point on the unit sphere where the (sign-normalized) form is `≤ 0`.
    NotElliptic { point: Vec<GaussianRational>, value: Rational },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EllipticReport {
    pub symbol: RealSymbol,
    /// Complex form after sign normalization.
    pub form: BihermitianForm,
    /// Whether `-p` was analysed because `p` is negative at the first sample.
    pub negated: bool,
    pub order: u32,
    pub verdict: EllipticVerdict,
    pub stabilization: StabilizationReport,
    /// Coefficient matrix `(E_μν)` of `q_d = ||z||^{2d}·p` when certified.
    pub e_matrix: Option<HermitianMatrix>,
    pub factor: Option<WeightedGramFactor>,
    /// Whether the rows' common zero set is only the origin; never examined.
    pub zero_set_check: &'static str,
}

impl EllipticReport {
    pub fn certified_d(&self) -> Option<u32> {
        match self.verdict {
            EllipticVerdict::Certified { d } => Some(d),
            _ => None,
        }
    }

    /// Factor rows as holomorphic differential operators, `∂z1^2*∂z2` for
    /// `∂³/∂z1²∂z2`, with their weights.
    pub fn operator_rows(&self) -> Vec<(Rational, String)> {
        self.factor
            .as_ref()
            .map(|w| {
                (0..w.rows.s())
                    .map(|k| (w.rows.weight(k), w.rows.get(k, 0).format_with("∂z")))
                    .collect()
            })
            .unwrap_or_default()
    }
}

const SAMPLE_LIMIT: usize = 729;

fn sphere_value(f: &BihermitianForm, z: &[GaussianRational]) -> Result<Rational> {
    Ok(f.evaluate_exact(z, z)?[0][0].re.clone())
}

/// Runs the strict stabilization search on the complex form of `p`.
pub fn certify_elliptic(p: &RealSymbol, d_max: u32) -> Result<EllipticReport> {
    let order = p.order().ok_or(Error::NotComplexBihomogeneous)?;
    if order % 2 != 0 {
        return Err(Error::OddOrder(order));
    }
    let mut form = real_to_complex(p)?;
    if !is_complex_bihomogeneous(&form) {
        return Err(Error::NotComplexBihomogeneous);
    }
    let samples = grid_points(p.n(), SAMPLE_LIMIT);
    let mut negated = false;
    for z in &samples {
        let v = sphere_value(&form, z)?;
        if !v.is_zero() {
            if v.is_negative() {
                form = form.scale(&GaussianRational::from_int(-1));
                negated = true;
            }
            break;
        }
    }
    let stabilization = find_minimal_d(&form, Mode::Strict, d_max)?;
    let (verdict, e_matrix) = match stabilization.d_min {
        Some(d) => (
            EllipticVerdict::Certified { d },
            stabilization.last_step().map(|s| s.certificate.matrix.clone()),
        ),
        None => {
            let mut verdict = EllipticVerdict::NotCertified { d_max };
            for z in &samples {
                let value = sphere_value(&form, z)?;
                if !value.is_positive() {
                    verdict = EllipticVerdict::NotElliptic { point: z.clone(), value };
                    break;
                }
            }
            (verdict, None)
        }
    };
    Ok(EllipticReport {
        symbol: p.clone(),
        factor: stabilization.factor.clone(),
        form,
        negated,
        order,
        verdict,
        stabilization,
        e_matrix,
        zero_set_check: "not checked",
    })
}
