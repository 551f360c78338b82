//! Truncated power series in one and two complex variables.
//!
//! Both carriers store dense coefficient grids with the truncation degree as
//! explicit state. Binary operations zero-extend to common degrees; nothing
//! is ever truncated silently. Grid sizes are bounded by
//! [`DEFAULT_MAX_ENTRIES`] unless a caller passes its own limit.

mod onevar;
mod pattern;
mod twovar;

pub use onevar::OneVarSeries;
pub use pattern::DiagonalPattern;
pub use twovar::{TwoVarSeries, Variable};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the number of stored coefficients per series (4096 x 4096).
pub const DEFAULT_MAX_ENTRIES: usize = 4096 * 4096;

/// Default admissibility threshold for `|a00|` when forming reciprocals.
pub const DEFAULT_EPS0: f64 = 1e-12;

pub(crate) fn check_entries(entries: usize, limit: usize) -> Result<()> {
    if entries > limit {
        return Err(Error::SizeLimit { entries, limit });
    }
    Ok(())
}

pub(crate) fn check_finite(coeffs: &[Complex64]) -> Result<()> {
    match coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}
