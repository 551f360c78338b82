use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{DiagonalPattern, TwoVarSeries};
use crate::spaces::AlphaWeight;

/// Riesz-type mean of the Taylor series of `1/f`:
/// `p_n = sum_{k,l <= n} (1 - phi(max(k,l)) / phi(n+1)) b_{k,l} z1^k z2^l`.
///
/// The constant coefficient is `b_{0,0}` exactly. When `phi(n+1) = 0`
/// (logarithmic gauge with `n = 0`) only that coefficient survives.
pub fn riesz_approximant(f: &TwoVarSeries, a: AlphaWeight, n: usize, eps0: f64) -> Result<TwoVarSeries> {
    let top = a.phi((n + 1) as f64)?;
    let b = f.reciprocal(n, n, eps0)?;
    let gauge: Vec<f64> = (0..=n).map(|m| a.phi(m as f64)).collect::<Result<_>>()?;
    let mut p = TwoVarSeries::zeros(n, n)?;
    for k in 0..=n {
        for l in 0..=n {
            let weight = if k == 0 && l == 0 {
                1.0
            } else if top == 0.0 {
                0.0
            } else {
                1.0 - gauge[k.max(l)] / top
            };
            p.set(k, l, b.coeff(k, l) * weight);
        }
    }
    Ok(p)
}

/// `n`-th Cesàro mean of `1/f` in the `max(k, l)` grading.
///
/// Computed twice, as the Riesz mean at `alpha = 0` and as the average of
/// the Taylor polynomials `t_0, ..., t_n`; disagreement beyond rounding is an
/// internal error.
pub fn cesaro(f: &TwoVarSeries, n: usize, eps0: f64) -> Result<TwoVarSeries> {
    let hardy = AlphaWeight::new(0.0)?;
    let by_weights = riesz_approximant(f, hardy, n, eps0)?;

    let b = f.reciprocal(n, n, eps0)?;
    let mut by_average = TwoVarSeries::zeros(n, n)?;
    for m in 0..=n {
        for k in 0..=m {
            for l in 0..=m {
                let sum = by_average.coeff(k, l) + b.coeff(k, l);
                by_average.set(k, l, sum);
            }
        }
    }
    let by_average = by_average.scale(Complex64::new(1.0 / (n + 1) as f64, 0.0));

    let scale = 1.0 + b.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let gap = (&by_weights - &by_average)
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if gap > 1e-12 * scale {
        return Err(Error::Internal(format!(
            "Cesàro weights and Taylor averages differ by {gap:e}"
        )));
    }
    Ok(by_weights)
}

/// `||p_n f - 1||^2_alpha` for `f = 1 - z1^M z2^N` and `p_n` its Riesz approximant,
/// evaluated from the telescoping form of `p_n f - 1` rather than by series products.
///
/// With `u = z1^M z2^N`, `L = max(M, N)` and `J = floor(n / L)`, the approximant is
/// `sum_{j <= J} (1 - phi(Lj)/phi(n+1)) u^j`, so
/// `p_n f - 1 = -phi(n+1)^{-1} sum_{j=1}^{J+1} [phi(min(Lj, n+1)) - phi(L(j-1))] u^j`
/// and each `u^j` carries weight `(Mj+1)^alpha (Nj+1)^alpha`.
/// For `M = N = 1` the sum runs over `j = 1..=n+1` with increments `phi(j) - phi(j-1)`.
pub fn closed_form_twisted(a: AlphaWeight, n: usize, pat: DiagonalPattern) -> Result<f64> {
    let top = a.phi((n + 1) as f64)?;
    let weight = |j: usize| a.weight(pat.m() * j) * a.weight(pat.n() * j);
    if top == 0.0 {
        // p_0 = 1, residual -u
        return Ok(weight(1));
    }
    let step = pat.m().max(pat.n());
    let last = n / step;
    let mut total = 0.0;
    for j in 1..=last + 1 {
        let hi = a.phi((step * j).min(n + 1) as f64)?;
        let lo = a.phi((step * (j - 1)) as f64)?;
        total += (hi - lo).powi(2) * weight(j);
    }
    Ok(total / (top * top))
}
