use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use super::{check_entries, check_finite, DiagonalPattern, OneVarSeries, DEFAULT_MAX_ENTRIES};
use crate::error::{Error, Result};

/// Which variable a slice holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Z1,
    Z2,
}

/// Truncated bivariate series `sum a_{k,l} z1^k z2^l` with `k <= deg1`,
/// `l <= deg2`, stored as a dense row-major grid (row index `k`).
#[derive(Debug, Clone)]
pub struct TwoVarSeries {
    deg1: usize,
    deg2: usize,
    coeffs: Vec<Complex64>,
}

impl TwoVarSeries {
    pub fn new(deg1: usize, deg2: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let entries = grid_entries(deg1, deg2)?;
        check_entries(entries, DEFAULT_MAX_ENTRIES)?;
        if coeffs.len() != entries {
            return Err(Error::Input(format!(
                "grid of degrees ({deg1}, {deg2}) needs {entries} coefficients, got {}",
                coeffs.len()
            )));
        }
        check_finite(&coeffs)?;
        Ok(Self { deg1, deg2, coeffs })
    }

    pub fn zeros(deg1: usize, deg2: usize) -> Result<Self> {
        Self::zeros_with_limit(deg1, deg2, DEFAULT_MAX_ENTRIES)
    }

    pub fn zeros_with_limit(deg1: usize, deg2: usize, limit: usize) -> Result<Self> {
        let entries = grid_entries(deg1, deg2)?;
        check_entries(entries, limit)?;
        Ok(Self {
            deg1,
            deg2,
            coeffs: vec![Complex64::default(); entries],
        })
    }

    /// Builds the smallest grid holding the given `(k, l, a_{k,l})` terms.
    /// Repeated indices accumulate.
    pub fn from_terms(terms: &[(usize, usize, Complex64)]) -> Result<Self> {
        let deg1 = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let deg2 = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut out = Self::zeros(deg1, deg2)?;
        for &(k, l, c) in terms {
            *out.at_mut(k, l) += c;
        }
        check_finite(&out.coeffs)?;
        Ok(out)
    }

    pub fn from_real_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let terms: Vec<_> = terms
            .iter()
            .map(|&(k, l, c)| (k, l, Complex64::new(c, 0.0)))
            .collect();
        Self::from_terms(&terms)
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            deg1: 0,
            deg2: 0,
            coeffs: vec![c],
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn monomial(k: usize, l: usize) -> Result<Self> {
        let mut out = Self::zeros(k, l)?;
        *out.at_mut(k, l) = Complex64::new(1.0, 0.0);
        Ok(out)
    }

    /// `g(z1) h(z2)`.
    pub fn separable(g: &OneVarSeries, h: &OneVarSeries) -> Result<Self> {
        let mut out = Self::zeros(g.deg(), h.deg())?;
        for (k, a) in g.coeffs().iter().enumerate() {
            for (l, b) in h.coeffs().iter().enumerate() {
                *out.at_mut(k, l) = a * b;
            }
        }
        Ok(out)
    }

    /// `F(z1)`, constant in `z2`.
    pub fn from_z1(f: &OneVarSeries) -> Self {
        Self {
            deg1: f.deg(),
            deg2: 0,
            coeffs: f.coeffs().to_vec(),
        }
    }

    pub fn deg1(&self) -> usize {
        self.deg1
    }

    pub fn deg2(&self) -> usize {
        self.deg2
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_{k,l}`, zero outside the stored grid.
    pub fn coeff(&self, k: usize, l: usize) -> Complex64 {
        if k <= self.deg1 && l <= self.deg2 {
            self.coeffs[k * (self.deg2 + 1) + l]
        } else {
            Complex64::default()
        }
    }

    pub fn set(&mut self, k: usize, l: usize, value: Complex64) {
        *self.at_mut(k, l) = value;
    }

    fn at_mut(&mut self, k: usize, l: usize) -> &mut Complex64 {
        let stride = self.deg2 + 1;
        &mut self.coeffs[k * stride + l]
    }

    /// Nonzero terms in row-major order.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let stride = self.deg2 + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::default())
            .map(move |(i, c)| (i / stride, i % stride, *c))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::default())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            deg1: self.deg1,
            deg2: self.deg2,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Copy of the grid restricted (or zero-extended) to degrees `(d1, d2)`.
    pub fn truncate(&self, d1: usize, d2: usize) -> Result<Self> {
        let mut out = Self::zeros(d1, d2)?;
        for k in 0..=d1.min(self.deg1) {
            for l in 0..=d2.min(self.deg2) {
                *out.at_mut(k, l) = self.coeff(k, l);
            }
        }
        Ok(out)
    }

    /// Exact polynomial product with degrees `(f.deg1 + g.deg1, f.deg2 + g.deg2)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with_limit(other, DEFAULT_MAX_ENTRIES)
    }

    pub fn mul_with_limit(&self, other: &Self, limit: usize) -> Result<Self> {
        let mut out = Self::zeros_with_limit(self.deg1 + other.deg1, self.deg2 + other.deg2, limit)?;
        // Walk the sparser factor's support and add shifted copies of the other grid.
        let (sparse, dense) = if self.support().count() <= other.support().count() {
            (self, other)
        } else {
            (other, self)
        };
        let stride = out.deg2 + 1;
        let dense_stride = dense.deg2 + 1;
        for (i, j, a) in sparse.support() {
            for k in 0..=dense.deg1 {
                let row_out = &mut out.coeffs[(i + k) * stride + j..][..dense_stride];
                let row_in = &dense.coeffs[k * dense_stride..][..dense_stride];
                for (o, b) in row_out.iter_mut().zip(row_in) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Formal reciprocal truncated at `(d1, d2)`.
    ///
    /// Uses `b_{0,0} = 1/a_{0,0}` and, for the remaining indices,
    /// `b_{k,l} = -(1/a_{0,0}) sum a_{i,j} b_{k-i,l-j}` over
    /// `(0,0) != (i,j) <= (k,l)`.
    pub fn reciprocal(&self, d1: usize, d2: usize, eps0: f64) -> Result<Self> {
        let a00 = self.coeff(0, 0);
        if a00.norm() <= eps0 {
            return Err(Error::SingularReciprocal {
                eps0,
                magnitude: a00.norm(),
            });
        }
        let inv = a00.inv();
        let terms: Vec<_> = self.support().filter(|&(i, j, _)| i + j > 0).collect();
        let mut b = Self::zeros(d1, d2)?;
        for k in 0..=d1 {
            for l in 0..=d2 {
                let value = if k == 0 && l == 0 {
                    inv
                } else {
                    let mut acc = Complex64::default();
                    for &(i, j, a) in &terms {
                        if i <= k && j <= l {
                            acc += a * b.coeff(k - i, l - j);
                        }
                    }
                    -inv * acc
                };
                *b.at_mut(k, l) = value;
            }
        }
        Ok(b)
    }

    /// Slice obtained by fixing one variable at `w`, `|w| < 1`.
    pub fn slice(&self, fixed: Variable, w: Complex64) -> Result<OneVarSeries> {
        if w.norm() >= 1.0 {
            return Err(Error::Domain { modulus: w.norm() });
        }
        let coeffs = match fixed {
            Variable::Z2 => (0..=self.deg1)
                .map(|k| horner((0..=self.deg2).map(|l| self.coeff(k, l)), w))
                .collect(),
            Variable::Z1 => (0..=self.deg2)
                .map(|l| horner((0..=self.deg1).map(|k| self.coeff(k, l)), w))
                .collect(),
        };
        Ok(OneVarSeries::from_vec_unchecked(coeffs))
    }

    /// `f(z, z)`: coefficient `n` is `sum_{k+l=n} a_{k,l}`.
    pub fn diag_restrict(&self) -> OneVarSeries {
        let mut out = vec![Complex64::default(); self.deg1 + self.deg2 + 1];
        for k in 0..=self.deg1 {
            for l in 0..=self.deg2 {
                out[k + l] += self.coeff(k, l);
            }
        }
        OneVarSeries::from_vec_unchecked(out)
    }

    /// `F(z1^M z2^N)`.
    pub fn lift(f: &OneVarSeries, pat: DiagonalPattern) -> Result<Self> {
        let (m, n) = (pat.m(), pat.n());
        let mut out = Self::zeros(m * f.deg(), n * f.deg())?;
        for (k, c) in f.coeffs().iter().enumerate() {
            *out.at_mut(m * k, n * k) = *c;
        }
        Ok(out)
    }

    /// Inverse of [`TwoVarSeries::lift`] on series supported by the pattern.
    pub fn restrict(&self, pat: DiagonalPattern) -> Result<OneVarSeries> {
        if let Some((k, l, _)) = self.support().find(|&(k, l, _)| pat.index_of(k, l).is_none()) {
            return Err(Error::PatternViolation {
                k,
                l,
                m: pat.m(),
                n: pat.n(),
            });
        }
        let top = pat.max_index(self.deg1, self.deg2);
        Ok(OneVarSeries::from_vec_unchecked(
            (0..=top).map(|j| self.coeff(pat.m() * j, pat.n() * j)).collect(),
        ))
    }

    pub fn is_diagonal(&self, pat: DiagonalPattern) -> bool {
        self.support().all(|(k, l, _)| pat.index_of(k, l).is_some())
    }

    /// Zeroes every coefficient off the pattern.
    pub fn diagonal_project(&self, pat: DiagonalPattern) -> Self {
        let mut out = self.clone();
        let stride = self.deg2 + 1;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if pat.index_of(i / stride, i % stride).is_none() {
                *c = Complex64::default();
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let d1 = self.deg1.max(other.deg1);
        let d2 = self.deg2.max(other.deg2);
        let mut coeffs = Vec::with_capacity((d1 + 1) * (d2 + 1));
        for k in 0..=d1 {
            for l in 0..=d2 {
                coeffs.push(op(self.coeff(k, l), other.coeff(k, l)));
            }
        }
        Self {
            deg1: d1,
            deg2: d2,
            coeffs,
        }
    }
}

fn grid_entries(deg1: usize, deg2: usize) -> Result<usize> {
    (deg1 + 1)
        .checked_mul(deg2 + 1)
        .ok_or(Error::SizeLimit {
            entries: usize::MAX,
            limit: DEFAULT_MAX_ENTRIES,
        })
}

fn horner(coeffs: impl DoubleEndedIterator<Item = Complex64>, w: Complex64) -> Complex64 {
    coeffs.rev().fold(Complex64::default(), |acc, c| acc * w + c)
}

impl PartialEq for TwoVarSeries {
    fn eq(&self, other: &Self) -> bool {
        let d1 = self.deg1.max(other.deg1);
        let d2 = self.deg2.max(other.deg2);
        (0..=d1).all(|k| (0..=d2).all(|l| self.coeff(k, l) == other.coeff(k, l)))
    }
}

impl Add for &TwoVarSeries {
    type Output = TwoVarSeries;
    fn add(self, rhs: Self) -> TwoVarSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TwoVarSeries {
    type Output = TwoVarSeries;
    fn sub(self, rhs: Self) -> TwoVarSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TwoVarSeries {
    type Output = TwoVarSeries;
    fn neg(self) -> TwoVarSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
