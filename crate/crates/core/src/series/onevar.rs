use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use super::{check_entries, check_finite, DEFAULT_MAX_ENTRIES};
use crate::error::{Error, Result};

/// Truncated power series `sum_{k <= deg} a_k z^k`.
#[derive(Debug, Clone)]
pub struct OneVarSeries {
    coeffs: Vec<Complex64>,
}

impl OneVarSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("a series needs at least one coefficient".into()));
        }
        check_entries(coeffs.len(), DEFAULT_MAX_ENTRIES)?;
        check_finite(&coeffs)?;
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zeros(deg: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); deg + 1],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `a_k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn set(&mut self, k: usize, value: Complex64) {
        self.coeffs[k] = value;
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Exact product; degree is the sum of degrees.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let deg = self.deg() + other.deg();
        check_entries(deg + 1, DEFAULT_MAX_ENTRIES)?;
        let mut out = vec![Complex64::default(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::default() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * z + c)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..len).map(|k| op(self.coeff(k), other.coeff(k))).collect(),
        }
    }
}

impl PartialEq for OneVarSeries {
    fn eq(&self, other: &Self) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl Add for &OneVarSeries {
    type Output = OneVarSeries;
    fn add(self, rhs: Self) -> OneVarSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &OneVarSeries {
    type Output = OneVarSeries;
    fn sub(self, rhs: Self) -> OneVarSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &OneVarSeries {
    type Output = OneVarSeries;
    fn neg(self) -> OneVarSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
