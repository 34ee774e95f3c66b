//! Exact inertia of Hermitian matrices over `Q(i)`.
//!
//! [`ldl_signature`] runs a symmetric elimination with diagonal pivoting (largest
//! `|M_kk|`, lowest index on ties). When the remaining Schur complement has an
//! all-zero diagonal but a nonzero entry `S_kl`, no diagonal pivot exists. The
//! matrix is then indefinite: a witness is read off the `{k, l}` block, and an
//! elementary congruence `row_k += c·row_l` (`c ∈ {1, i}`) creates a nonzero
//! pivot so that the elimination, and hence the inertia count, can finish.
//!
//! The certificate therefore records
//!
//! ```text
//! P · (E·M·E*) · Pᵀ = L · D · L*
//! ```
//!
//! where `E = E_s ⋯ E_1` is the product of the recorded elementary operations
//! (each of determinant 1), `P` the pivot permutation, `L` unit lower triangular
//! and `D` real. By Sylvester's law the signs of `D` are the inertia of `M`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hermform::HermitianMatrix;
use crate::scalar::{GaussianRational, Rational};

/// `row_target += factor · row_source` together with the matching column operation
/// `col_target += conj(factor) · col_source`, in original indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryCongruence {
    pub target: usize,
    pub source: usize,
    pub factor: GaussianRational,
}

/// Exact LDL* record with inertia and, when the matrix is not PSD, a vector `v`
/// with `v*·M·v < 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignatureCertificate {
    pub matrix: HermitianMatrix,
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
    /// `permutation[p]` is the original index eliminated at step `p`.
    pub permutation: Vec<usize>,
    pub congruences: Vec<ElementaryCongruence>,
    /// Row-major `N×N`, unit lower triangular. Columns of zero pivots are unit vectors.
    pub l: Vec<GaussianRational>,
    pub d: Vec<Rational>,
    pub witness: Option<Vec<GaussianRational>>,
    /// `v*·M·v` for the witness.
    pub witness_value: Option<Rational>,
}

impl SignatureCertificate {
    pub fn size(&self) -> usize {
        self.d.len()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n_pos == self.size()
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.n_neg == 0
    }

    pub fn l_entry(&self, a: usize, b: usize) -> &GaussianRational {
        &self.l[a * self.size() + b]
    }

    /// Independent re-check of every stated invariant: the factorization identity,
    /// triangularity, inertia counts, the witness value and its sign.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let n = self.matrix.size();
        if self.d.len() != n || self.l.len() != n * n || self.permutation.len() != n {
            return Err("inconsistent certificate sizes".into());
        }
        let mut seen = vec![false; n];
        for &p in &self.permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err("permutation is not a bijection".into());
            }
        }
        for op in &self.congruences {
            if op.target >= n || op.source >= n || op.target == op.source {
                return Err("invalid elementary congruence".into());
            }
        }
        for a in 0..n {
            if !self.l_entry(a, a).is_one() {
                return Err(format!("L[{a}][{a}] is not 1"));
            }
            for b in a + 1..n {
                if !self.l_entry(a, b).is_zero() {
                    return Err(format!("L[{a}][{b}] above the diagonal"));
                }
            }
        }
        for b in 0..n {
            if self.d[b].is_zero() && (b + 1..n).any(|a| !self.l_entry(a, b).is_zero()) {
                return Err(format!("column {b} of L is not a unit vector at a zero pivot"));
            }
        }
        let pos = self.d.iter().filter(|x| x.is_positive()).count();
        let neg = self.d.iter().filter(|x| x.is_negative()).count();
        if (pos, neg, n - pos - neg) != (self.n_pos, self.n_neg, self.n_zero) {
            return Err("inertia counts disagree with D".into());
        }

        let transformed = apply_congruences(&self.matrix, &self.congruences);
        for a in 0..n {
            for b in 0..=a {
                let mut acc = GaussianRational::zero();
                for k in 0..=b {
                    if self.d[k].is_zero() {
                        continue;
                    }
                    let t = self.l_entry(a, k).scale(&self.d[k]);
                    acc += &(&t * &self.l_entry(b, k).conj());
                }
                let lhs = &transformed[self.permutation[a] * n + self.permutation[b]];
                if *lhs != acc {
                    return Err(format!("P·E·M·E*·Pᵀ differs from L·D·L* at ({a}, {b})"));
                }
            }
        }

        match (&self.witness, &self.witness_value) {
            (None, None) => {
                if self.n_neg > 0 {
                    return Err("negative inertia without a witness".into());
                }
            }
            (Some(v), Some(value)) => {
                if v.len() != n {
                    return Err("witness has the wrong length".into());
                }
                let q = self.matrix.quadratic_form(v);
                if q != *value {
                    return Err("witness value does not match v*·M·v".into());
                }
                if !q.is_negative() {
                    return Err("witness does not give a negative value".into());
                }
            }
            _ => return Err("witness and witness value must come together".into()),
        }
        Ok(())
    }
}

/// `E·M·E*` as a row-major dense array.
fn apply_congruences(m: &HermitianMatrix, ops: &[ElementaryCongruence]) -> Vec<GaussianRational> {
    let n = m.size();
    let mut a = m.entries().to_vec();
    for op in ops {
        row_col_op(&mut a, n, op.target, op.source, &op.factor);
    }
    a
}

/// In-place `row_t += c·row_s` followed by `col_t += conj(c)·col_s`.
fn row_col_op(a: &mut [GaussianRational], n: usize, t: usize, s: usize, c: &GaussianRational) {
    for b in 0..n {
        let v = &a[s * n + b] * c;
        a[t * n + b] += &v;
    }
    let cc = c.conj();
    for b in 0..n {
        let v = &a[b * n + s] * &cc;
        a[b * n + t] += &v;
    }
}

/// Exact pivoted LDL* with inertia.
pub fn ldl_signature(m: &HermitianMatrix) -> SignatureCertificate {
    let n = m.size();
    // Working copy in permuted coordinates: w[p][q] = (P·E·M·E*·Pᵀ)[p][q] restricted
    // to the active Schur complement for p, q >= step.
    let mut w = m.entries().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = vec![GaussianRational::zero(); n * n];
    let mut d = vec![Rational::zero(); n];
    let mut ops = Vec::new();
    let mut witness: Option<Vec<GaussianRational>> = None;

    let mut t = 0;
    while t < n {
        let best = (t..n)
            .filter(|&p| !w[p * n + p].re.is_zero())
            .max_by(|&a, &b| {
                w[a * n + a]
                    .re
                    .abs()
                    .cmp(&w[b * n + b].re.abs())
                    .then(b.cmp(&a))
            });
        let Some(p) = best else {
            let off = (t..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .find(|&(a, b)| !w[a * n + b].is_zero());
            let Some((k, q)) = off else {
                // The remaining block is exactly zero.
                break;
            };
            if witness.is_none() {
                // y = e_k - conj(S_kq)·e_q gives y*·S·y = -2|S_kq|^2.
                let mut y = vec![GaussianRational::zero(); n];
                y[k] = GaussianRational::one();
                y[q] = -w[k * n + q].conj();
                witness = Some(lift_witness(&y, t, &l, &perm, &ops));
            }
            let s_kq = &w[k * n + q];
            let c = if s_kq.re.is_zero() {
                GaussianRational::i()
            } else {
                GaussianRational::one()
            };
            row_col_op(&mut w, n, k, q, &c);
            for b in 0..t {
                let v = &l[q * n + b] * &c;
                l[k * n + b] += &v;
            }
            ops.push(ElementaryCongruence {
                target: perm[k],
                source: perm[q],
                factor: c,
            });
            continue;
        };

        if p != t {
            swap_symmetric(&mut w, n, p, t);
            for b in 0..t {
                l.swap(p * n + b, t * n + b);
            }
            perm.swap(p, t);
        }
        let pivot = w[t * n + t].re.clone();
        if pivot.is_negative() && witness.is_none() {
            let mut y = vec![GaussianRational::zero(); n];
            y[t] = GaussianRational::one();
            witness = Some(lift_witness(&y, t, &l, &perm, &ops));
        }
        let inv = GaussianRational::from_real(pivot.recip());
        for a in t + 1..n {
            l[a * n + t] = &w[a * n + t] * &inv;
        }
        for a in t + 1..n {
            let la = &l[a * n + t];
            if la.is_zero() {
                continue;
            }
            for b in t + 1..=a {
                let update = &w[a * n + t] * &l[b * n + t].conj();
                w[a * n + b] -= &update;
                if a != b {
                    w[b * n + a] = w[a * n + b].conj();
                }
            }
        }
        d[t] = pivot;
        t += 1;
    }
    for a in 0..n {
        l[a * n + a] = GaussianRational::one();
    }

    let n_pos = d.iter().filter(|x| x.is_positive()).count();
    let n_neg = d.iter().filter(|x| x.is_negative()).count();
    let witness_value = witness.as_ref().map(|v| m.quadratic_form(v));
    if let Some(value) = &witness_value {
        assert!(value.is_negative(), "internal error: witness is not negative");
    }
    SignatureCertificate {
        matrix: m.clone(),
        n_pos,
        n_neg,
        n_zero: n - n_pos - n_neg,
        permutation: perm,
        congruences: ops,
        l,
        d,
        witness,
        witness_value,
    }
}

fn swap_symmetric(w: &mut [GaussianRational], n: usize, p: usize, t: usize) {
    for b in 0..n {
        w.swap(p * n + b, t * n + b);
    }
    for a in 0..n {
        w.swap(a * n + p, a * n + t);
    }
}

/// Maps a Schur-complement vector `y` (supported on positions `>= t`) back to a
/// vector `v` in the original coordinates with `v*·M·v = y*·S·y`.
fn lift_witness(
    y: &[GaussianRational],
    t: usize,
    l: &[GaussianRational],
    perm: &[usize],
    ops: &[ElementaryCongruence],
) -> Vec<GaussianRational> {
    let n = y.len();
    // x = (x1, y) with L11*·x1 = -L21*·y, solved by back substitution.
    let mut x = y.to_vec();
    for b in (0..t).rev() {
        let mut acc = GaussianRational::zero();
        for a in b + 1..n {
            if !x[a].is_zero() {
                acc += &(&l[a * n + b].conj() * &x[a]);
            }
        }
        x[b] = -acc;
    }
    // Undo the permutation: u = Pᵀ·x.
    let mut u = vec![GaussianRational::zero(); n];
    for (p, &orig) in perm.iter().enumerate() {
        u[orig] = x[p].clone();
    }
    // u*·(E·M·E*)·u = (E*·u)*·M·(E*·u); E* = E_1*⋯E_s*, applied right to left.
    for op in ops.iter().rev() {
        let add = &op.factor.conj() * &u[op.target];
        u[op.source] += &add;
    }
    u
}

/// `M` is positive definite iff every pivot is positive.
pub fn is_positive_definite(m: &HermitianMatrix) -> (bool, SignatureCertificate) {
    let cert = ldl_signature(m);
    (cert.is_positive_definite(), cert)
}

pub fn is_positive_semidefinite(m: &HermitianMatrix) -> (bool, SignatureCertificate) {
    let cert = ldl_signature(m);
    (cert.is_positive_semidefinite(), cert)
}

/// `M = Σ a_k u_k u_k* − Σ b_l v_l v_l*` with positive rational weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramDecomposition {
    pub positive: Vec<(Rational, Vec<GaussianRational>)>,
    pub negative: Vec<(Rational, Vec<GaussianRational>)>,
}

impl GramDecomposition {
    /// Rebuilds the matrix from its rank-one terms.
    pub fn reconstruct(&self, size: usize) -> Result<HermitianMatrix> {
        let mut acc = vec![GaussianRational::zero(); size * size];
        let parts = self
            .positive
            .iter()
            .map(|p| (p, false))
            .chain(self.negative.iter().map(|p| (p, true)));
        for ((weight, u), negate) in parts {
            if u.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: u.len(),
                });
            }
            let w = if negate { -weight.clone() } else { weight.clone() };
            for a in 0..size {
                if u[a].is_zero() {
                    continue;
                }
                let ua = u[a].scale(&w);
                for b in 0..size {
                    acc[a * size + b] += &(&ua * &u[b].conj());
                }
            }
        }
        HermitianMatrix::new(size, acc)
    }
}

/// Splits `M` into weighted rank-one terms read off the LDL* certificate, in pivot
/// order. Vectors are the columns of `E⁻¹·Pᵀ·L`.
pub fn gram_decomposition(m: &HermitianMatrix) -> (GramDecomposition, SignatureCertificate) {
    let cert = ldl_signature(m);
    (gram_from_certificate(&cert), cert)
}

pub fn gram_from_certificate(cert: &SignatureCertificate) -> GramDecomposition {
    let n = cert.size();
    let mut out = GramDecomposition {
        positive: Vec::new(),
        negative: Vec::new(),
    };
    for t in 0..n {
        if cert.d[t].is_zero() {
            continue;
        }
        let mut u = vec![GaussianRational::zero(); n];
        for a in t..n {
            u[cert.permutation[a]] = cert.l_entry(a, t).clone();
        }
        // E⁻¹ = E_1⁻¹⋯E_s⁻¹ applied right to left; E_j⁻¹ = I − c·e_t·e_sᵀ.
        for op in cert.congruences.iter().rev() {
            let sub = &op.factor * &u[op.source];
            u[op.target] -= &sub;
        }
        if cert.d[t].is_positive() {
            out.positive.push((cert.d[t].clone(), u));
        } else {
            out.negative.push((-cert.d[t].clone(), u));
        }
    }
    out
}
