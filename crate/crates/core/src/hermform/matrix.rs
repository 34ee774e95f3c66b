use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};

/// Dense Hermitian matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermitianMatrix {
    size: usize,
    data: Vec<GaussianRational>,
}

impl HermitianMatrix {
    /// Builds from row-major data, rejecting anything that is not exactly Hermitian.
    pub fn new(size: usize, data: Vec<GaussianRational>) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                found: data.len(),
            });
        }
        for a in 0..size {
            for b in a..size {
                if data[a * size + b] != data[b * size + a].conj() {
                    return Err(Error::NotHermitian);
                }
            }
        }
        Ok(HermitianMatrix { size, data })
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::ShapeMismatch("rows of unequal length".into()));
        }
        Self::new(size, rows.into_iter().flatten().collect())
    }

    pub fn zeros(size: usize) -> Self {
        HermitianMatrix {
            size,
            data: vec![GaussianRational::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal(&vec![Rational::from_integer(1.into()); size])
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (k, d) in entries.iter().enumerate() {
            m.data[k * entries.len() + k] = GaussianRational::from_real(d.clone());
        }
        m
    }

    /// Builds from the upper triangle; the lower triangle is filled by conjugation.
    /// Diagonal values must be real.
    pub fn from_upper(size: usize, mut entry: impl FnMut(usize, usize) -> GaussianRational) -> Result<Self> {
        let mut m = Self::zeros(size);
        for a in 0..size {
            for b in a..size {
                let v = entry(a, b);
                if a == b && !v.is_real() {
                    return Err(Error::NotHermitian);
                }
                m.data[b * size + a] = v.conj();
                m.data[a * size + b] = v;
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> &GaussianRational {
        &self.data[a * self.size + b]
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        self.data.chunks(self.size.max(1)).take(self.size)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| a == b || self.get(a, b).is_zero()))
    }

    /// `v*·M·v`, which is real for Hermitian `M`.
    pub fn quadratic_form(&self, v: &[GaussianRational]) -> Rational {
        assert_eq!(v.len(), self.size);
        let mut acc = GaussianRational::zero();
        for a in 0..self.size {
            if v[a].is_zero() {
                continue;
            }
            let mut row = GaussianRational::zero();
            for (b, vb) in v.iter().enumerate() {
                if !vb.is_zero() {
                    row += &(self.get(a, b) * vb);
                }
            }
            acc += &(&v[a].conj() * &row);
        }
        debug_assert!(acc.im.is_zero());
        acc.re
    }

    /// `C*·M·C` for a square `C` given row-major; Hermitian by construction.
    pub fn congruence(&self, c: &[GaussianRational]) -> Self {
        let n = self.size;
        assert_eq!(c.len(), n * n);
        let mut mc = vec![GaussianRational::zero(); n * n];
        for a in 0..n {
            for k in 0..n {
                let m = self.get(a, k);
                if m.is_zero() {
                    continue;
                }
                for b in 0..n {
                    mc[a * n + b] += &(m * &c[k * n + b]);
                }
            }
        }
        let mut out = vec![GaussianRational::zero(); n * n];
        for a in 0..n {
            for k in 0..n {
                let ca = c[k * n + a].conj();
                if ca.is_zero() {
                    continue;
                }
                for b in 0..n {
                    out[a * n + b] += &(&ca * &mc[k * n + b]);
                }
            }
        }
        HermitianMatrix { size: n, data: out }
    }

    /// `D·M·D` for a real diagonal `D`.
    pub fn scale_diagonal(&self, d: &[Rational]) -> Self {
        assert_eq!(d.len(), self.size);
        let n = self.size;
        let mut data = self.data.clone();
        for a in 0..n {
            for b in 0..n {
                data[a * n + b] = data[a * n + b].scale(&(&d[a] * &d[b]));
            }
        }
        HermitianMatrix { size: n, data }
    }
}
