use super::DecaySeries;
use crate::error::{Error, Result};

const MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMode {
    Power,
    Logarithmic,
}

/// Empirical rate of a decay sequence.
///
/// In power mode `exponent` is the least-squares slope of `log dist_sq`
/// against `log(n+1)` and `constant` the exponentiated intercept. In
/// logarithmic mode `constant` is the median of `dist_sq * log(n+1)` and
/// `r_squared` is a stability score `1 - (max - min) / max` of that product.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub mode: FitMode,
    pub exponent: f64,
    pub constant: f64,
    pub r_squared: f64,
    pub fit_range: (usize, usize),
}

/// Restricts fits to `n_min <= n <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub n_min: usize,
    pub n_max: usize,
}

impl Default for FitWindow {
    /// Drops `n < 10`, where transients distort asymptotic slopes.
    fn default() -> Self {
        Self {
            n_min: 10,
            n_max: usize::MAX,
        }
    }
}

impl FitWindow {
    pub fn new(n_min: usize, n_max: usize) -> Self {
        Self { n_min, n_max }
    }

    pub fn all() -> Self {
        Self::new(0, usize::MAX)
    }
}

fn windowed(ds: &DecaySeries, window: FitWindow) -> Result<Vec<(usize, f64)>> {
    let points: Vec<_> = ds
        .points
        .iter()
        .filter(|p| p.n >= window.n_min && p.n <= window.n_max)
        .map(|p| (p.n, p.dist_sq))
        .collect();
    if points.len() < MIN_POINTS {
        return Err(Error::Input(format!(
            "a rate fit needs at least {MIN_POINTS} points, window has {}",
            points.len()
        )));
    }
    if let Some(&(n, d)) = points.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::DegenerateFit(format!(
            "dist_sq = {d:e} at n = {n}; f may be exactly invertible at finite order"
        )));
    }
    Ok(points)
}

/// Ordinary least squares of `log dist_sq` on `log(n+1)`.
pub fn fit_power(ds: &DecaySeries, window: FitWindow) -> Result<RateFit> {
    let points = windowed(ds, window)?;
    let xs: Vec<f64> = points.iter().map(|p| ((p.0 + 1) as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let count = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / count;
    let y_mean = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all points share one n".into()));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(RateFit {
        mode: FitMode::Power,
        exponent: slope,
        constant: intercept.exp(),
        r_squared,
        fit_range: (points[0].0, points[points.len() - 1].0),
    })
}

/// Stability of `dist_sq * log(n+1)`, the signature of a `1 / log n` rate.
pub fn fit_log_mode(ds: &DecaySeries, window: FitWindow) -> Result<RateFit> {
    let points = windowed(ds, window)?;
    if points[0].0 == 0 {
        return Err(Error::DegenerateFit("log(n+1) vanishes at n = 0".into()));
    }
    let mut products: Vec<f64> = points.iter().map(|p| p.1 * ((p.0 + 1) as f64).ln()).collect();
    products.sort_by(f64::total_cmp);
    let len = products.len();
    let median = if len % 2 == 1 {
        products[len / 2]
    } else {
        0.5 * (products[len / 2 - 1] + products[len / 2])
    };
    let (lo, hi) = (products[0], products[len - 1]);
    Ok(RateFit {
        mode: FitMode::Logarithmic,
        exponent: 0.0,
        constant: median,
        r_squared: (1.0 - (hi - lo) / hi).clamp(0.0, 1.0),
        fit_range: (points[0].0, points[len - 1].0),
    })
}
