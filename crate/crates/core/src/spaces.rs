//! Weighted coefficient norms of the Dirichlet-type scale.
//!
//! The one-variable space `D_a` carries the weight `(k+1)^a` on `|a_k|^2`;
//! the bidisk space uses the product weight `(k+1)^a (l+1)^a`. Special cases:
//! `a = 0` is the Hardy space, `a = -1` the Bergman space and `a = 1` the
//! Dirichlet space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{DiagonalPattern, OneVarSeries, TwoVarSeries};

/// Space parameter `alpha` with weight `(k+1)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaWeight {
    alpha: f64,
}

impl AlphaWeight {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Input(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `(k+1)^alpha`.
    pub fn weight(&self, k: usize) -> f64 {
        if self.alpha == 0.0 {
            1.0
        } else {
            ((k + 1) as f64).powf(self.alpha)
        }
    }

    /// Weights for `k = 0..=max_deg`, so inner loops avoid `powf`.
    pub fn table(&self, max_deg: usize) -> Vec<f64> {
        (0..=max_deg).map(|k| self.weight(k)).collect()
    }

    /// Weight of the same family at `2 alpha`: the norm the `(1,1)` restriction is isometric to.
    pub fn doubled(&self) -> Self {
        Self {
            alpha: 2.0 * self.alpha,
        }
    }

    /// Rate gauge: `s^(1-alpha)` for `alpha < 1`, `max(log s, 0)` at `alpha = 1`.
    pub fn phi(&self, s: f64) -> Result<f64> {
        self.check_rate()?;
        if self.alpha == 1.0 {
            Ok(if s > 1.0 { s.ln() } else { 0.0 })
        } else {
            Ok(s.powf(1.0 - self.alpha))
        }
    }

    /// Inverse of [`AlphaWeight::phi`] on the branch `s >= 1`.
    pub fn phi_inv(&self, t: f64) -> Result<f64> {
        self.check_rate()?;
        if t < 0.0 {
            return Err(Error::Input(format!("phi_inv needs t >= 0, got {t}")));
        }
        if self.alpha == 1.0 {
            Ok(t.exp())
        } else {
            Ok(t.powf(1.0 / (1.0 - self.alpha)))
        }
    }

    fn check_rate(&self) -> Result<()> {
        if self.alpha > 1.0 {
            return Err(Error::UnsupportedRate { alpha: self.alpha });
        }
        Ok(())
    }
}

/// Constants of the two-sided comparison between `||f||_alpha` and
/// `||R(f)||_{D_{2 alpha}}` on `(M, N)`-diagonal series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonConstants {
    pub c1: f64,
    pub c2: f64,
}

/// `||f||_alpha` on the bidisk.
pub fn norm2(f: &TwoVarSeries, a: AlphaWeight) -> f64 {
    norm2_sq(f, a).sqrt()
}

pub fn norm2_sq(f: &TwoVarSeries, a: AlphaWeight) -> f64 {
    let w1 = a.table(f.deg1());
    let w2 = a.table(f.deg2());
    let mut total = 0.0;
    for k in 0..=f.deg1() {
        let row: f64 = (0..=f.deg2())
            .map(|l| w2[l] * f.coeff(k, l).norm_sqr())
            .sum();
        total += w1[k] * row;
    }
    total
}

/// `||F||_{D_alpha}`.
pub fn norm1(f: &OneVarSeries, a: AlphaWeight) -> f64 {
    norm1_sq(f, a).sqrt()
}

pub fn norm1_sq(f: &OneVarSeries, a: AlphaWeight) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| a.weight(k) * c.norm_sqr())
        .sum()
}

/// `<f, g>_alpha`, conjugate-linear in `g`.
pub fn inner2(f: &TwoVarSeries, g: &TwoVarSeries, a: AlphaWeight) -> Complex64 {
    let d1 = f.deg1().min(g.deg1());
    let d2 = f.deg2().min(g.deg2());
    let w1 = a.table(d1);
    let w2 = a.table(d2);
    let mut total = Complex64::default();
    for k in 0..=d1 {
        for l in 0..=d2 {
            total += f.coeff(k, l) * g.coeff(k, l).conj() * (w1[k] * w2[l]);
        }
    }
    total
}

/// `<F, G>_{D_alpha}`, conjugate-linear in `G`.
pub fn inner1(f: &OneVarSeries, g: &OneVarSeries, a: AlphaWeight) -> Complex64 {
    f.coeffs()
        .iter()
        .zip(g.coeffs())
        .enumerate()
        .map(|(k, (x, y))| x * y.conj() * a.weight(k))
        .sum()
}

/// Target index of the diagonal restriction: `alpha - 1` for `alpha >= 0`,
/// `2 alpha - 1` otherwise.
pub fn beta_of_alpha(alpha: f64) -> f64 {
    if alpha >= 0.0 {
        alpha - 1.0
    } else {
        2.0 * alpha - 1.0
    }
}

/// `||k_w||^2_{D_alpha} = sum_k (k+1)^(-alpha) |w|^(2k)`, summed until a
/// geometric majorant of the tail drops below `tol`.
pub fn kernel_norm_sq(a: AlphaWeight, w: Complex64, tol: f64) -> Result<f64> {
    let r2 = w.norm_sqr();
    if r2 >= 1.0 {
        return Err(Error::DivergentKernel { modulus: w.norm() });
    }
    if !(tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    if r2 == 0.0 {
        return Ok(1.0);
    }
    let exponent = a.alpha().abs();
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut k = 0usize;
    loop {
        let term = ((k + 1) as f64).powf(-a.alpha()) * power;
        sum += term;
        // Ratio of consecutive terms is at most ((k+2)/(k+1))^|alpha| r^2, decreasing in k.
        let q = (((k + 2) as f64) / ((k + 1) as f64)).powf(exponent) * r2;
        if q < 1.0 && term * q / (1.0 - q) < tol {
            return Ok(sum);
        }
        power *= r2;
        k += 1;
    }
}

/// `c2 = min(1, M^a) min(1, N^a)`, `c1 = max(1, M^a) max(1, N^a)`.
///
/// The per-coefficient ratio `((Mk+1)(Nk+1))^a / (k+1)^(2a)` moves
/// monotonically between 1 and `(MN)^a`, which bounds the squared norms;
/// since `c2 <= 1 <= c1` the same constants bound the norms themselves.
pub fn comparison_constants(alpha: f64, pat: DiagonalPattern) -> ComparisonConstants {
    let m = (pat.m() as f64).powf(alpha);
    let n = (pat.n() as f64).powf(alpha);
    ComparisonConstants {
        c1: m.max(1.0) * n.max(1.0),
        c2: m.min(1.0) * n.min(1.0),
    }
}
