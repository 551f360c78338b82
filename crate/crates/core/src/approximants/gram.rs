use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{BasisSpec, SolveOptions};
use crate::error::{Error, Result};
use crate::series::TwoVarSeries;
use crate::spaces::AlphaWeight;

const POWER_ITERATIONS: usize = 40;

/// Normal equations for `min ||p f - 1||_alpha` over the span of a monomial basis.
///
/// `matrix[(i, j)] = <m_j f, m_i f>_alpha` and `rhs[i] = <1, m_i f>_alpha`,
/// which is `conj(a00)` at the constant monomial and zero elsewhere.
#[derive(Debug, Clone)]
pub struct GramSystem {
    basis: Vec<(usize, usize)>,
    matrix: DMatrix<Complex64>,
    rhs: Vec<Complex64>,
    cond_estimate: f64,
    factor: Option<Factor>,
}

#[derive(Debug, Clone)]
enum Factor {
    Real(Cholesky<f64, Dyn>),
    Complex(Cholesky<Complex64, Dyn>),
}

impl Factor {
    fn new(matrix: &DMatrix<Complex64>) -> Option<Self> {
        if matrix.iter().all(|z| z.im == 0.0) {
            Cholesky::new(matrix.map(|z| z.re)).map(Factor::Real)
        } else {
            Cholesky::new(matrix.clone()).map(Factor::Complex)
        }
    }

    fn solve(&self, rhs: &DVector<Complex64>) -> DVector<Complex64> {
        match self {
            Factor::Real(chol) => {
                let re = chol.solve(&rhs.map(|z| z.re));
                let im = chol.solve(&rhs.map(|z| z.im));
                re.zip_map(&im, Complex64::new)
            }
            Factor::Complex(chol) => chol.solve(rhs),
        }
    }
}

impl GramSystem {
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }

    /// Estimate of the spectral condition number (power and inverse
    /// iteration); infinite when the matrix is not numerically positive definite.
    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    /// Solves `G c = rhs`. On factorization failure retries once with
    /// `G + lambda I`, `lambda = ridge_factor * trace(G) / dim`.
    /// Returns the coefficients and whether the ridge was applied.
    pub(crate) fn solve(&self, opts: &SolveOptions) -> Result<(Vec<Complex64>, bool)> {
        let rhs = DVector::from_column_slice(&self.rhs);
        if let Some(factor) = &self.factor {
            return Ok((factor.solve(&rhs).iter().copied().collect(), false));
        }
        if !opts.regularize {
            return Err(Error::Conditioning {
                cond_estimate: self.cond_estimate,
            });
        }
        let dim = self.dim() as f64;
        let trace: f64 = self.matrix.diagonal().iter().map(|z| z.re).sum();
        let lambda = opts.ridge_factor * trace / dim;
        let mut shifted = self.matrix.clone();
        for i in 0..self.dim() {
            shifted[(i, i)] += Complex64::new(lambda, 0.0);
        }
        match Factor::new(&shifted) {
            Some(factor) => Ok((factor.solve(&rhs).iter().copied().collect(), true)),
            None => Err(Error::Conditioning {
                cond_estimate: self.cond_estimate,
            }),
        }
    }
}

/// Assembles the Gram system of `f` against the basis described by `spec`.
///
/// Entries are accumulated by shifting over the support of `f`:
/// `G[i][j] = sum_s w(j + s) f_s conj(f_{s + j - i})`.
pub fn gram_assemble(
    f: &TwoVarSeries,
    a: AlphaWeight,
    spec: &BasisSpec,
    opts: &SolveOptions,
) -> Result<GramSystem> {
    if f.is_zero() {
        return Err(Error::Input("cannot approximate with the zero function".into()));
    }
    let basis = spec.indices();
    if basis.len() > opts.max_unknowns {
        return Err(Error::SizeLimit {
            entries: basis.len(),
            limit: opts.max_unknowns,
        });
    }
    let support: Vec<_> = f.support().collect();
    let max1 = basis.iter().map(|b| b.0).max().unwrap_or(0) + f.deg1();
    let max2 = basis.iter().map(|b| b.1).max().unwrap_or(0) + f.deg2();
    let w1 = a.table(max1);
    let w2 = a.table(max2);

    let dim = basis.len();
    let rows: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let (i1, i2) = (basis[i].0 as isize, basis[i].1 as isize);
            (i..dim)
                .map(|j| {
                    let (j1, j2) = (basis[j].0 as isize, basis[j].1 as isize);
                    let mut acc = Complex64::default();
                    for &(s1, s2, fs) in &support {
                        let t1 = s1 as isize + j1 - i1;
                        let t2 = s2 as isize + j2 - i2;
                        if t1 < 0 || t2 < 0 {
                            continue;
                        }
                        let ft = f.coeff(t1 as usize, t2 as usize);
                        if ft == Complex64::default() {
                            continue;
                        }
                        let w = w1[j1 as usize + s1] * w2[j2 as usize + s2];
                        acc += fs * ft.conj() * w;
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, row) in rows.into_iter().enumerate() {
        for (offset, value) in row.into_iter().enumerate() {
            let j = i + offset;
            matrix[(i, j)] = value;
            matrix[(j, i)] = value.conj();
        }
        matrix[(i, i)].im = 0.0;
    }

    let mut rhs = vec![Complex64::default(); dim];
    if let Some(pos) = basis.iter().position(|&b| b == (0, 0)) {
        rhs[pos] = f.coeff(0, 0).conj();
    }

    let factor = Factor::new(&matrix);
    let cond_estimate = match &factor {
        Some(factor) => estimate_condition(&matrix, factor),
        None => f64::INFINITY,
    };

    Ok(GramSystem {
        basis,
        matrix,
        rhs,
        cond_estimate,
        factor,
    })
}

fn estimate_condition(matrix: &DMatrix<Complex64>, factor: &Factor) -> f64 {
    let dim = matrix.nrows();
    let start = DVector::from_fn(dim, |i, _| Complex64::new(1.0 + (i % 7) as f64 / 7.0, 0.0));
    let normalize = |v: DVector<Complex64>| {
        let norm = v.norm();
        if norm > 0.0 {
            v / Complex64::new(norm, 0.0)
        } else {
            v
        }
    };

    let mut v = normalize(start.clone());
    let mut lambda_max = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let next = matrix * &v;
        lambda_max = next.norm();
        v = normalize(next);
    }

    let mut v = normalize(start);
    let mut inv_max = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let next = factor.solve(&v);
        inv_max = next.norm();
        v = normalize(next);
    }
    if inv_max > 0.0 {
        lambda_max * inv_max
    } else {
        f64::INFINITY
    }
}
