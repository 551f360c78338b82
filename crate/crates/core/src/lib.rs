//! Polynomial approximation of `1/f` in Dirichlet-type spaces of the bidisk.
//!
//! The space `D_alpha` of the bidisk has norm
//! `||f||^2 = sum (k+1)^alpha (l+1)^alpha |a_{k,l}|^2`. Modules:
//!
//! * [`series`]: truncated power series in one and two variables;
//! * [`spaces`]: weighted norms together with rate gauges and comparison constants;
//! * [`approximants`]: optimal approximants from normal equations, and
//!   explicit Riesz and Cesàro means;
//! * [`capacity`]: logarithmic energy of measures on the torus and the
//!   Cauchy-transform certificate of non-cyclicity;
//! * [`analysis`]: decay scans with fitted rates and a cyclicity verdict;
//! * [`verify`]: seeded randomized checks of the norm inequalities.

pub mod analysis;
pub mod approximants;
pub mod capacity;
pub mod error;
pub mod series;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use series::{DiagonalPattern, OneVarSeries, TwoVarSeries, Variable};
pub use spaces::AlphaWeight;
