//! Logarithmic energy of probability measures on the torus, their Cauchy
//! transforms, and the bilinear pairing between the Dirichlet space and the
//! Bergman space of the bidisk.
//!
//! Measures are described only by their Fourier coefficients
//! `mu(k, l) = int e^{-i(k t1 + l t2)} d mu`. The energy with the product
//! kernel `log(e/|.|) log(e/|.|)` is
//!
//! ```text
//! I[mu] = 1 + sum_{k>=1} |mu(k,0)|^2 / k + sum_{l>=1} |mu(0,l)|^2 / l
//!           + 1/2 sum_{k != 0} sum_{l>=1} |mu(k,l)|^2 / (|k| l)
//! ```
//!
//! and a finite-energy measure on the boundary zero set of `f` yields a
//! Bergman function annihilating every polynomial multiple of `f`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TwoVarSeries;
use crate::spaces::{norm2_sq, AlphaWeight};

const HERMITIAN_TOL: f64 = 1e-12;
const BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureKind {
    /// Normalized Lebesgue measure: `mu(k,l) = delta_{(k,l),(0,0)}`.
    Lebesgue,
    /// Normalized integration current on `{(e^{it}, e^{-it})}`: `mu(k,l) = delta_{kl}`.
    DiagonalCurrent,
    /// Unit point mass at `(1, 1)`: `mu(k,l) = 1`.
    PointMass,
    /// Explicit coefficients; unspecified indices are zero.
    Custom(BTreeMap<(i64, i64), Complex64>),
}

/// Probability measure on the torus given by its Fourier coefficients up to
/// the cutoff `|k|, |l| <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMeasure {
    cutoff: usize,
    kind: MeasureKind,
}

impl FourierMeasure {
    pub fn lebesgue(cutoff: usize) -> Self {
        Self {
            cutoff,
            kind: MeasureKind::Lebesgue,
        }
    }

    pub fn diagonal_current(cutoff: usize) -> Self {
        Self {
            cutoff,
            kind: MeasureKind::DiagonalCurrent,
        }
    }

    pub fn point_mass(cutoff: usize) -> Self {
        Self {
            cutoff,
            kind: MeasureKind::PointMass,
        }
    }

    /// Builds a measure from coefficients on a half lattice, filling in the
    /// rest by `mu(-k,-l) = conj(mu(k,l))`.
    ///
    /// Accepted indices are `k > 0`, or `k = 0` and `l >= 0`. `mu(0,0)` must be 1
    /// and every coefficient must satisfy `|mu| <= 1`.
    pub fn custom(cutoff: usize, half: &[((i64, i64), Complex64)]) -> Result<Self> {
        let limit = cutoff as i64;
        let mut coeffs = BTreeMap::new();
        for &((k, l), value) in half {
            if !(k > 0 || (k == 0 && l >= 0)) {
                return Err(Error::Input(format!(
                    "coefficient ({k}, {l}) is outside the half lattice k > 0 or (k = 0, l >= 0)"
                )));
            }
            if k.abs() > limit || l.abs() > limit {
                return Err(Error::Input(format!("coefficient ({k}, {l}) exceeds cutoff {cutoff}")));
            }
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::Input(format!("coefficient ({k}, {l}) is not finite")));
            }
            if value.norm() > 1.0 + BOUND_TOL {
                return Err(Error::Input(format!(
                    "|mu({k}, {l})| = {} exceeds 1",
                    value.norm()
                )));
            }
            if coeffs.insert((k, l), value).is_some() {
                return Err(Error::Input(format!("coefficient ({k}, {l}) given twice")));
            }
            if (k, l) != (0, 0) {
                coeffs.insert((-k, -l), value.conj());
            }
        }
        match coeffs.get(&(0, 0)) {
            Some(c) if (c - Complex64::new(1.0, 0.0)).norm() <= HERMITIAN_TOL => {}
            other => {
                return Err(Error::Input(format!(
                    "a probability measure needs mu(0,0) = 1, got {other:?}"
                )))
            }
        }
        coeffs.insert((0, 0), Complex64::new(1.0, 0.0));
        Ok(Self {
            cutoff,
            kind: MeasureKind::Custom(coeffs),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    /// `mu(k, l)`; indices beyond the cutoff are a range error.
    pub fn coeff(&self, k: i64, l: i64) -> Result<Complex64> {
        let reach = k.unsigned_abs().max(l.unsigned_abs()) as usize;
        if reach > self.cutoff {
            return Err(Error::Range {
                requested: reach,
                available: self.cutoff,
            });
        }
        Ok(self.coeff_unchecked(k, l))
    }

    fn coeff_unchecked(&self, k: i64, l: i64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            MeasureKind::Lebesgue => {
                if k == 0 && l == 0 {
                    one
                } else {
                    Complex64::default()
                }
            }
            MeasureKind::DiagonalCurrent => {
                if k == l {
                    one
                } else {
                    Complex64::default()
                }
            }
            MeasureKind::PointMass => one,
            MeasureKind::Custom(map) => map.get(&(k, l)).copied().unwrap_or_default(),
        }
    }

    fn check_cutoff(&self, requested: usize) -> Result<()> {
        if requested > self.cutoff {
            return Err(Error::Range {
                requested,
                available: self.cutoff,
            });
        }
        Ok(())
    }
}

/// Partial energy with the four sums reported separately.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub cutoff: usize,
    pub partial: f64,
    /// `sum_{k=1}^K |mu(k,0)|^2 / k`.
    pub axis_z1: f64,
    /// `sum_{l=1}^K |mu(0,l)|^2 / l`.
    pub axis_z2: f64,
    /// `1/2 sum_{0<|k|<=K} sum_{l=1}^K |mu(k,l)|^2 / (|k| l)`.
    pub interior: f64,
}

/// Partial sum of the energy series up to `cutoff`.
pub fn energy(mu: &FourierMeasure, cutoff: usize) -> Result<EnergyReport> {
    mu.check_cutoff(cutoff)?;
    let big_k = cutoff as i64;
    let axis_z1 = pairwise_sum(
        &(1..=big_k)
            .map(|k| mu.coeff_unchecked(k, 0).norm_sqr() / k as f64)
            .collect::<Vec<_>>(),
    );
    let axis_z2 = pairwise_sum(
        &(1..=big_k)
            .map(|l| mu.coeff_unchecked(0, l).norm_sqr() / l as f64)
            .collect::<Vec<_>>(),
    );
    let rows: Vec<f64> = (-big_k..=big_k)
        .filter(|&k| k != 0)
        .map(|k| {
            let kf = k.unsigned_abs() as f64;
            pairwise_sum(
                &(1..=big_k)
                    .map(|l| mu.coeff_unchecked(k, l).norm_sqr() / (kf * l as f64))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let interior = 0.5 * pairwise_sum(&rows);
    Ok(EnergyReport {
        cutoff,
        partial: 1.0 + axis_z1 + axis_z2 + interior,
        axis_z1,
        axis_z2,
        interior,
    })
}

/// Fixed-order pairwise summation, so results do not depend on scheduling.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1..=8 => values.iter().sum(),
        len => {
            let (lo, hi) = values.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Cauchy integral `int (1 - e^{it1} z1)^{-1} (1 - e^{it2} z2)^{-1} d mu`
/// truncated at `(d1, d2)`; its `(k, l)` coefficient is `conj(mu(k, l))`.
pub fn cauchy_transform(mu: &FourierMeasure, d1: usize, d2: usize) -> Result<TwoVarSeries> {
    mu.check_cutoff(d1.max(d2))?;
    let mut out = TwoVarSeries::zeros(d1, d2)?;
    for k in 0..=d1 {
        for l in 0..=d2 {
            out.set(k, l, mu.coeff_unchecked(k as i64, l as i64).conj());
        }
    }
    Ok(out)
}

/// Squared norm in the Bergman space of the bidisk, which is the weighted space at `alpha = -1`.
pub fn bergman_norm_sq(g: &TwoVarSeries) -> f64 {
    norm2_sq(g, AlphaWeight::new(-1.0).expect("finite alpha"))
}

/// Bilinear pairing `sum a_{k,l} b_{k,l}` (no conjugation) over the common grid.
pub fn dual_pairing(f: &TwoVarSeries, g: &TwoVarSeries) -> Complex64 {
    let d1 = f.deg1().min(g.deg1());
    let d2 = f.deg2().min(g.deg2());
    let mut total = Complex64::default();
    for k in 0..=d1 {
        for l in 0..=d2 {
            total += f.coeff(k, l) * g.coeff(k, l);
        }
    }
    total
}

/// `max_{0 <= k,l <= maxdeg} |<z1^k z2^l f, C[mu]>|`.
///
/// The Cauchy transform is taken at degree `maxdeg + deg f` in each variable,
/// which covers every product exactly; the measure must reach that far.
pub fn annihilation_check(f: &TwoVarSeries, mu: &FourierMeasure, maxdeg: usize) -> Result<f64> {
    let d1 = maxdeg + f.deg1();
    let d2 = maxdeg + f.deg2();
    let transform = cauchy_transform(mu, d1, d2)?;
    let support: Vec<_> = f.support().collect();
    let mut worst: f64 = 0.0;
    for k in 0..=maxdeg {
        for l in 0..=maxdeg {
            let mut acc = Complex64::default();
            for &(i, j, a) in &support {
                acc += a * transform.coeff(i + k, j + l);
            }
            worst = worst.max(acc.norm());
        }
    }
    Ok(worst)
}
