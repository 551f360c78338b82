use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{DiagonalPattern, TwoVarSeries};

/// Structural class of `f` that determines its sharp rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `g(z1) h(z2)` with both factors non-constant.
    Separable,
    /// A function of `z1^M z2^N`.
    Diagonal(DiagonalPattern),
    /// A function of one variable only.
    OneVar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateMode {
    /// `dist^2 ~ (n+1)^exponent`.
    Power { exponent: f64 },
    /// `dist^2 ~ 1 / log(n+1)`.
    Logarithmic,
    /// `dist^2` bounded below: `f` is not cyclic.
    Plateau,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryRate {
    pub family: Family,
    pub alpha: f64,
    pub mode: RateMode,
}

impl TheoryRate {
    /// Rate gauge at order `n`: `(n+1)^exponent`, `1/log(n+1)`, or 1 on a plateau.
    /// `None` where the gauge is undefined (`n = 0` in logarithmic mode).
    pub fn gauge(&self, n: usize) -> Option<f64> {
        let s = (n + 1) as f64;
        match self.mode {
            RateMode::Power { exponent } => Some(s.powf(exponent)),
            RateMode::Logarithmic => (n > 0).then(|| 1.0 / s.ln()),
            RateMode::Plateau => Some(1.0),
        }
    }
}

/// Sharp decay rate of `dist^2(1, f P_n)` for the given family.
///
/// Separable and one-variable functions decay like `phi_alpha^{-1}(n+1)`;
/// `(M, N)`-diagonal functions like `phi_{2 alpha}^{-1}(n+1)`, and the latter
/// stop decaying once `alpha > 1/2`.
pub fn predicted_rate(alpha: f64, family: Family) -> Result<TheoryRate> {
    let index = match family {
        Family::Separable | Family::OneVar => alpha,
        Family::Diagonal(_) => 2.0 * alpha,
    };
    let mode = if index < 1.0 {
        RateMode::Power {
            exponent: -(1.0 - index),
        }
    } else if index == 1.0 {
        RateMode::Logarithmic
    } else if matches!(family, Family::Diagonal(_)) && alpha <= 1.0 {
        RateMode::Plateau
    } else {
        return Err(Error::UnsupportedRate { alpha });
    };
    Ok(TheoryRate { family, alpha, mode })
}

/// Recognizes the families above from the support of `f`.
///
/// Returns `None` for constants and for series outside every family.
/// Diagonal patterns are tested before separability, so `1 - z1 z2` is
/// diagonal and `1 - z1` is one-variable.
pub fn classify_family(f: &TwoVarSeries) -> Option<Family> {
    let nonconstant: Vec<_> = f.support().filter(|&(k, l, _)| k + l > 0).collect();
    if nonconstant.is_empty() {
        return None;
    }
    if nonconstant.iter().all(|t| t.1 == 0) || nonconstant.iter().all(|t| t.0 == 0) {
        return Some(Family::OneVar);
    }
    if let Some(&(k, l, _)) = nonconstant.iter().find(|t| t.0 > 0 && t.1 > 0) {
        let g = gcd(k, l);
        if let Ok(pat) = DiagonalPattern::new(k / g, l / g) {
            if f.is_diagonal(pat) {
                return Some(Family::Diagonal(pat));
            }
        }
    }
    is_rank_one(f).then_some(Family::Separable)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `a_{k,l} a_{k',l'} = a_{k,l'} a_{k',l}` for all index pairs, up to rounding.
fn is_rank_one(f: &TwoVarSeries) -> bool {
    let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let Some((pk, pl, pivot)) = f.support().max_by(|a, b| a.2.norm().total_cmp(&b.2.norm())) else {
        return false;
    };
    let tol = 1e-12 * scale * scale;
    for k in 0..=f.deg1() {
        for l in 0..=f.deg2() {
            let lhs: Complex64 = f.coeff(k, l) * pivot;
            let rhs = f.coeff(k, pl) * f.coeff(pk, l);
            if (lhs - rhs).norm() > tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(terms: &[(usize, usize, f64)]) -> TwoVarSeries {
        TwoVarSeries::from_real_terms(terms).unwrap()
    }

    #[test]
    fn rate_table() {
        let diag = Family::Diagonal(DiagonalPattern::DIAGONAL);
        assert_eq!(predicted_rate(0.0, diag).unwrap().mode, RateMode::Power { exponent: -1.0 });
        assert_eq!(predicted_rate(0.0, Family::Separable).unwrap().mode, RateMode::Power { exponent: -1.0 });
        assert_eq!(predicted_rate(1.0, diag).unwrap().mode, RateMode::Plateau);
        assert_eq!(predicted_rate(0.5, diag).unwrap().mode, RateMode::Logarithmic);
        assert_eq!(predicted_rate(1.0, Family::Separable).unwrap().mode, RateMode::Logarithmic);
        assert_eq!(predicted_rate(-1.0, diag).unwrap().mode, RateMode::Power { exponent: -3.0 });
        assert_eq!(predicted_rate(0.5, Family::OneVar).unwrap().mode, RateMode::Power { exponent: -0.5 });
        assert!(predicted_rate(1.5, Family::Separable).is_err());
        assert!(predicted_rate(1.5, diag).is_err());
    }

    #[test]
    fn gauges() {
        let log = predicted_rate(1.0, Family::OneVar).unwrap();
        assert_eq!(log.gauge(0), None);
        assert!((log.gauge(9).unwrap() - 1.0 / 10f64.ln()).abs() < 1e-15);
        let power = predicted_rate(0.0, Family::OneVar).unwrap();
        assert_eq!(power.gauge(4), Some(0.2));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_family(&TwoVarSeries::one()), None);
        assert_eq!(classify_family(&re(&[(0, 0, 1.0), (1, 0, -1.0)])), Some(Family::OneVar));
        assert_eq!(
            classify_family(&re(&[(0, 0, 1.0), (1, 1, -1.0)])),
            Some(Family::Diagonal(DiagonalPattern::DIAGONAL))
        );
        assert_eq!(
            classify_family(&re(&[(0, 0, 1.0), (2, 3, -1.0)])),
            Some(Family::Diagonal(DiagonalPattern::new(2, 3).unwrap()))
        );
        assert_eq!(
            classify_family(&re(&[(0, 0, 1.0), (2, 2, -1.0), (4, 4, 1.0)])),
            Some(Family::Diagonal(DiagonalPattern::DIAGONAL))
        );
        assert_eq!(
            classify_family(&re(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 1.0)])),
            Some(Family::Separable)
        );
        assert_eq!(classify_family(&re(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0)])), None);
    }
}
