//! Decay scans of `dist^2(1, f P_n)`, rate fits and a cyclicity verdict.

mod fit;
mod theory;

pub use fit::{fit_log_mode, fit_power, FitMode, FitWindow, RateFit};
pub use theory::{classify_family, predicted_rate, Family, RateMode, TheoryRate};

use rayon::prelude::*;

use crate::approximants::{diagonal_reduce_solve, solve_optimal, BasisKind, BasisSpec, SolveOptions};
use crate::error::{Error, Result};
use crate::series::TwoVarSeries;
use crate::spaces::AlphaWeight;

/// Increases of `dist_sq` along a scan beyond this (relative to `max(1, previous)`) are errors.
pub const MONOTONICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayPoint {
    pub n: usize,
    pub dist_sq: f64,
    /// Solver diagnostics, absent for points supplied directly.
    pub cond_estimate: Option<f64>,
    pub ortho_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecayMeta {
    pub alpha: Option<f64>,
    pub label: String,
    pub basis: Option<BasisKind>,
}

/// Samples of `dist^2` with strictly increasing `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    pub points: Vec<DecayPoint>,
    pub meta: DecayMeta,
}

impl DecaySeries {
    /// Builds a series from raw `(n, dist_sq)` pairs.
    pub fn from_points(points: Vec<(usize, f64)>) -> Result<Self> {
        check_increasing(points.iter().map(|p| p.0))?;
        if let Some(&(n, d)) = points.iter().find(|p| !(p.1 >= 0.0)) {
            return Err(Error::Input(format!("dist_sq = {d} at n = {n} is not a nonnegative number")));
        }
        Ok(Self {
            points: points
                .into_iter()
                .map(|(n, dist_sq)| DecayPoint {
                    n,
                    dist_sq,
                    cond_estimate: None,
                    ortho_residual: None,
                })
                .collect(),
            meta: DecayMeta::default(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.meta.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist_sq(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.dist_sq).collect()
    }
}

fn check_increasing(ns: impl Iterator<Item = usize>) -> Result<()> {
    let mut prev: Option<usize> = None;
    for n in ns {
        if prev.is_some_and(|p| p >= n) {
            return Err(Error::Input(format!("orders must be strictly increasing, found {n} after {}", prev.unwrap())));
        }
        prev = Some(n);
    }
    Ok(())
}

/// One optimal solve per `n`, run concurrently and returned in order of `n`.
///
/// Diagonal bases go through the reduced solver. Errors carry the failing
/// order; a scan whose residuals increase is rejected as a numerical failure.
pub fn decay_scan(
    f: &TwoVarSeries,
    a: AlphaWeight,
    n_values: &[usize],
    kind: BasisKind,
    opts: &SolveOptions,
) -> Result<DecaySeries> {
    decay_scan_with_tol(f, a, n_values, kind, opts, MONOTONICITY_TOL)
}

/// [`decay_scan`] with an explicit monotonicity tolerance.
pub fn decay_scan_with_tol(
    f: &TwoVarSeries,
    a: AlphaWeight,
    n_values: &[usize],
    kind: BasisKind,
    opts: &SolveOptions,
    monotone_tol: f64,
) -> Result<DecaySeries> {
    check_increasing(n_values.iter().copied())?;
    let solved: Vec<DecayPoint> = n_values
        .par_iter()
        .map(|&n| {
            let result = match kind {
                BasisKind::Diagonal(pat) => diagonal_reduce_solve(f, a, n, pat, opts),
                _ => solve_optimal(f, a, &BasisSpec::new(n, kind), opts),
            };
            result
                .map(|r| DecayPoint {
                    n,
                    dist_sq: r.residual_sq,
                    cond_estimate: Some(r.cond_estimate),
                    ortho_residual: Some(r.ortho_residual),
                })
                .map_err(|e| e.at_order(n))
        })
        .collect::<Result<_>>()?;

    for pair in solved.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.dist_sq - prev.dist_sq > monotone_tol * prev.dist_sq.max(1.0) {
            return Err(Error::Internal(format!(
                "dist_sq rose from {:e} at n = {} to {:e} at n = {}",
                prev.dist_sq, prev.n, next.dist_sq, next.n
            )));
        }
    }
    Ok(DecaySeries {
        points: solved,
        meta: DecayMeta {
            alpha: Some(a.alpha()),
            label: String::new(),
            basis: Some(kind),
        },
    })
}

/// Fits in the mode the theory predicts, or in both modes when it predicts
/// nothing usable, keeping the one with the higher `r_squared`.
pub fn fit_rate(ds: &DecaySeries, theory: Option<&TheoryRate>, window: FitWindow) -> Result<RateFit> {
    match theory.map(|t| t.mode) {
        Some(RateMode::Logarithmic) => fit_log_mode(ds, window),
        Some(RateMode::Power { .. }) => fit_power(ds, window),
        Some(RateMode::Plateau) | None => {
            let power = fit_power(ds, window)?;
            match fit_log_mode(ds, window) {
                Ok(log) if log.r_squared > power.r_squared => Ok(log),
                _ => Ok(power),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Decaying,
    Plateau,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictConfig {
    pub min_points: usize,
    /// Required ratio `n_last / n_first` (with `n_first` read as 1 when 0).
    pub min_span: f64,
    /// Decaying requires `last < decay_ratio * first`.
    pub decay_ratio: f64,
    pub min_r_squared: f64,
    pub min_log_stability: f64,
    /// Plateau requires the last two values to agree to this relative tolerance.
    pub plateau_rel_tol: f64,
    pub plateau_floor: f64,
    /// Values at or below this count as exact inversion.
    pub exact_tol: f64,
    pub window: FitWindow,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            min_points: 8,
            min_span: 4.0,
            decay_ratio: 0.5,
            min_r_squared: 0.9,
            min_log_stability: 0.8,
            plateau_rel_tol: 1e-3,
            plateau_floor: 0.05,
            exact_tol: 1e-24,
            window: FitWindow::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    /// Some order has `dist_sq` at rounding level: `f` is inverted by a polynomial.
    pub exact_inversion: bool,
    pub power: Option<RateFit>,
    pub log: Option<RateFit>,
}

/// Conservative classification of a decay scan.
pub fn cyclicity_verdict(ds: &DecaySeries, cfg: &VerdictConfig) -> Result<VerdictReport> {
    if ds.len() < cfg.min_points {
        return Err(Error::Input(format!(
            "a verdict needs at least {} points, got {}",
            cfg.min_points,
            ds.len()
        )));
    }
    let first = &ds.points[0];
    let last = &ds.points[ds.len() - 1];
    if (last.n as f64) < cfg.min_span * first.n.max(1) as f64 {
        return Err(Error::Input(format!(
            "orders {}..{} span less than a factor {}",
            first.n, last.n, cfg.min_span
        )));
    }
    if ds.points.iter().any(|p| p.dist_sq <= cfg.exact_tol) {
        return Ok(VerdictReport {
            verdict: Verdict::Decaying,
            exact_inversion: true,
            power: None,
            log: None,
        });
    }

    let in_window = ds
        .points
        .iter()
        .filter(|p| p.n >= cfg.window.n_min && p.n <= cfg.window.n_max)
        .count();
    let window = if in_window >= 5 { cfg.window } else { FitWindow::all() };
    let power = fit_power(ds, window).ok();
    let log = fit_log_mode(ds, window).ok();

    let fits_well = power.as_ref().is_some_and(|f| f.r_squared >= cfg.min_r_squared)
        || log.as_ref().is_some_and(|f| f.r_squared >= cfg.min_log_stability);
    let prev = ds.points[ds.len() - 2].dist_sq;
    let verdict = if last.dist_sq < cfg.decay_ratio * first.dist_sq && fits_well {
        Verdict::Decaying
    } else if (prev - last.dist_sq).abs() < cfg.plateau_rel_tol * last.dist_sq && last.dist_sq >= cfg.plateau_floor {
        Verdict::Plateau
    } else {
        Verdict::Inconclusive
    };
    Ok(VerdictReport {
        verdict,
        exact_inversion: false,
        power,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(terms: &[(usize, usize, f64)]) -> TwoVarSeries {
        TwoVarSeries::from_real_terms(terms).unwrap()
    }

    fn w(alpha: f64) -> AlphaWeight {
        AlphaWeight::new(alpha).unwrap()
    }

    fn twisted() -> TwoVarSeries {
        re(&[(0, 0, 1.0), (1, 1, -1.0)])
    }

    fn h2(m: usize) -> f64 {
        (1..=m).map(|k| 1.0 / (k * k) as f64).sum()
    }

    #[test]
    fn diagonal_scan_matches_harmonic_law() {
        let ns: Vec<usize> = (1..=10).collect();
        let kind = BasisKind::Diagonal(crate::series::DiagonalPattern::DIAGONAL);
        let ds = decay_scan(&twisted(), w(0.0), &ns, kind, &SolveOptions::default()).unwrap();
        for p in &ds.points {
            assert!((p.dist_sq - 1.0 / (p.n + 2) as f64).abs() < 1e-12);
            assert!(p.cond_estimate.is_some());
        }
        assert_eq!(ds.meta.basis, Some(kind));
    }

    #[test]
    fn scan_of_one_is_zero() {
        let ds = decay_scan(&TwoVarSeries::one(), w(0.7), &[0, 1, 2], BasisKind::Full, &SolveOptions::default())
            .unwrap();
        assert!(ds.points.iter().all(|p| p.dist_sq == 0.0));
    }

    #[test]
    fn scan_rejects_unordered_orders() {
        let r = decay_scan(&twisted(), w(0.0), &[3, 2], BasisKind::Full, &SolveOptions::default());
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn scan_errors_name_the_order() {
        let opts = SolveOptions {
            max_unknowns: 9,
            ..SolveOptions::default()
        };
        let err = decay_scan(&twisted(), w(0.0), &[1, 2, 3], BasisKind::Full, &opts).unwrap_err();
        assert!(matches!(err, Error::AtOrder { n: 3, .. }), "{err:?}");
        assert_eq!(err.name(), "SizeLimit");
    }

    #[test]
    fn from_points_validates() {
        assert!(DecaySeries::from_points(vec![(1, 0.5), (1, 0.4)]).is_err());
        assert!(DecaySeries::from_points(vec![(1, -0.5)]).is_err());
        assert!(DecaySeries::from_points(vec![(1, f64::NAN)]).is_err());
    }

    #[test]
    fn planted_exponents() {
        for e in [-1.5, -1.0, -0.5, -0.25] {
            let ds = DecaySeries::from_points((10..=200).map(|n| (n, 0.7 * ((n + 1) as f64).powf(e))).collect())
                .unwrap();
            let fit = fit_power(&ds, FitWindow::default()).unwrap();
            assert!((fit.exponent - e).abs() <= 1e-8);
        }
    }

    #[test]
    fn theory_selects_fit_mode() {
        let ds = DecaySeries::from_points((10..=200).map(|n| (n, 1.0 / ((n + 1) as f64).ln())).collect()).unwrap();
        let log = predicted_rate(0.5, Family::Diagonal(crate::series::DiagonalPattern::DIAGONAL)).unwrap();
        assert_eq!(fit_rate(&ds, Some(&log), FitWindow::default()).unwrap().mode, FitMode::Logarithmic);
        assert_eq!(fit_rate(&ds, None, FitWindow::default()).unwrap().mode, FitMode::Logarithmic);
        let power = predicted_rate(0.0, Family::Separable).unwrap();
        assert_eq!(fit_rate(&ds, Some(&power), FitWindow::default()).unwrap().mode, FitMode::Power);
    }

    #[test]
    fn verdicts_on_fixtures() {
        let cfg = VerdictConfig::default();
        let decaying = DecaySeries::from_points((0..=200).step_by(10).map(|n| (n, 1.0 / (n + 2) as f64)).collect())
            .unwrap();
        let report = cyclicity_verdict(&decaying, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Decaying);
        assert!(report.power.is_some() && report.log.is_some());

        // dist^2 of 1 - z1 z2 in the Dirichlet space is 1 / H^(2)_{n+2}
        let plateau =
            DecaySeries::from_points((0..=200).step_by(10).map(|n| (n, 1.0 / h2(n + 2))).collect()).unwrap();
        assert_eq!(cyclicity_verdict(&plateau, &cfg).unwrap().verdict, Verdict::Plateau);

        let exact = DecaySeries::from_points((0..10).map(|n| (n, 0.0)).collect()).unwrap();
        let report = cyclicity_verdict(&exact, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Decaying);
        assert!(report.exact_inversion);
    }

    #[test]
    fn verdict_preconditions() {
        let cfg = VerdictConfig::default();
        let short = DecaySeries::from_points((1..=5).map(|n| (n * 10, 0.1)).collect()).unwrap();
        assert!(matches!(cyclicity_verdict(&short, &cfg), Err(Error::Input(_))));
        let narrow = DecaySeries::from_points((20..=30).map(|n| (n, 0.1)).collect()).unwrap();
        assert!(matches!(cyclicity_verdict(&narrow, &cfg), Err(Error::Input(_))));
    }
}
