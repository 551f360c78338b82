//! Seeded randomized checks of the norm inequalities and structural identities.
//!
//! Each suite draws `trials` random inputs from a ChaCha8 stream seeded by
//! `seed`, so reports are reproducible. A check fails when its inequality is
//! violated beyond [`SLACK`] relative to the larger side, or when an identity
//! misses its tolerance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::{DiagonalPattern, OneVarSeries, TwoVarSeries, Variable};
use crate::spaces::{
    beta_of_alpha, comparison_constants, kernel_norm_sq, norm1, norm2, AlphaWeight,
};

/// Relative rounding allowance for inequalities.
pub const SLACK: f64 = 1e-12;

pub const SUITES: &[&str] = &[
    "restriction",
    "separable",
    "polyextraction",
    "comparison",
    "slice",
    "lift",
    "roundtrip",
    "reciprocal",
];

const MAX_DEG: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckFailure {
    pub trial: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<CheckFailure>,
    /// Smallest `(rhs - lhs) / max(|lhs|, |rhs|)` over inequality checks, or
    /// the negated largest relative error over identity checks.
    pub worst_margin: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Recorder {
    report: SuiteReport,
    trial: usize,
}

impl Recorder {
    fn new(suite: &str) -> Self {
        Self {
            report: SuiteReport {
                suite: suite.to_string(),
                checks: 0,
                failures: Vec::new(),
                worst_margin: f64::INFINITY,
            },
            trial: 0,
        }
    }

    /// Records `lhs <= rhs` up to relative slack.
    fn at_most(&mut self, lhs: f64, rhs: f64, what: &str) {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        let margin = (rhs - lhs) / scale;
        self.push(margin >= -SLACK, margin, || format!("{what}: {lhs:e} > {rhs:e}"));
    }

    /// Records `|lhs - rhs| <= tol * max(1, |rhs|)`.
    fn equal(&mut self, lhs: f64, rhs: f64, tol: f64, what: &str) {
        let err = (lhs - rhs).abs() / rhs.abs().max(1.0);
        self.push(err <= tol, -err, || format!("{what}: {lhs:e} vs {rhs:e}"));
    }

    fn holds(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.push(ok, if ok { 0.0 } else { -1.0 }, what);
    }

    fn push(&mut self, ok: bool, margin: f64, detail: impl FnOnce() -> String) {
        self.report.checks += 1;
        self.report.worst_margin = self.report.worst_margin.min(margin);
        if !ok {
            self.report.failures.push(CheckFailure {
                trial: self.trial,
                detail: detail(),
            });
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

fn random_onevar(rng: &mut ChaCha8Rng) -> OneVarSeries {
    let deg = rng.random_range(0..=MAX_DEG);
    OneVarSeries::new((0..=deg).map(|_| unit(rng)).collect()).expect("small finite series")
}

fn random_twovar(rng: &mut ChaCha8Rng) -> TwoVarSeries {
    let (d1, d2) = (rng.random_range(0..=MAX_DEG), rng.random_range(0..=MAX_DEG));
    let coeffs = (0..(d1 + 1) * (d2 + 1)).map(|_| unit(rng)).collect();
    TwoVarSeries::new(d1, d2, coeffs).expect("small finite series")
}

fn random_pattern(rng: &mut ChaCha8Rng) -> DiagonalPattern {
    DiagonalPattern::new(rng.random_range(1..=3), rng.random_range(1..=3)).expect("positive pattern")
}

fn weight(alpha: f64) -> AlphaWeight {
    AlphaWeight::new(alpha).expect("finite alpha")
}

/// Runs the named suite.
pub fn run_suite(name: &str, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new(name);
    for trial in 0..trials {
        rec.trial = trial;
        match name {
            "restriction" => restriction(&mut rng, &mut rec),
            "separable" => separable(&mut rng, &mut rec)?,
            "polyextraction" => polyextraction(&mut rng, &mut rec)?,
            "comparison" => comparison(&mut rng, &mut rec)?,
            "slice" => slice(&mut rng, &mut rec)?,
            "lift" => lift(&mut rng, &mut rec)?,
            "roundtrip" => roundtrip(&mut rng, &mut rec)?,
            "reciprocal" => reciprocal(&mut rng, &mut rec)?,
            _ => {
                return Err(Error::Input(format!(
                    "unknown suite {name:?}; expected one of {}",
                    SUITES.join(", ")
                )))
            }
        }
    }
    Ok(rec.report)
}

/// Every suite in [`SUITES`] with the same trials and seed.
pub fn run_all(trials: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, trials, seed)).collect()
}

/// `||f(z, z)||_{D_beta(alpha)} <= ||f||_alpha` for `alpha <= 2`.
fn restriction(rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let f = random_twovar(rng);
    let diag = f.diag_restrict();
    for alpha in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let lhs = norm1(&diag, weight(beta_of_alpha(alpha)));
        rec.at_most(lhs, norm2(&f, weight(alpha)), &format!("restriction at alpha = {alpha}"));
    }
}

/// `||g(z1) h(z2)||_alpha = ||g||_{D_alpha} ||h||_{D_alpha}`.
fn separable(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let (g, h) = (random_onevar(rng), random_onevar(rng));
    let f = TwoVarSeries::separable(&g, &h)?;
    let alpha = rng.random_range(-2.0..=2.0);
    let a = weight(alpha);
    rec.equal(norm2(&f, a), norm1(&g, a) * norm1(&h, a), 1e-12, &format!("factorization at alpha = {alpha}"));
    Ok(())
}

/// For `(M, N)`-diagonal `f`, projecting `p` onto the pattern never increases `||p f - 1||_alpha`.
fn polyextraction(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let pat = random_pattern(rng);
    let f = random_twovar(rng).diagonal_project(pat);
    let p = random_twovar(rng);
    let alpha = rng.random_range(-2.0..=1.0);
    let a = weight(alpha);
    let one = TwoVarSeries::one();
    let full = norm2(&(&p.mul(&f)? - &one), a);
    let projected = norm2(&(&p.diagonal_project(pat).mul(&f)? - &one), a);
    rec.at_most(projected, full, &format!("projection onto {pat} at alpha = {alpha}"));
    Ok(())
}

/// `c2 ||R f||_{D_{2 alpha}} <= ||f||_alpha <= c1 ||R f||_{D_{2 alpha}}` on the pattern subspace.
fn comparison(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let pat = random_pattern(rng);
    let f = random_twovar(rng).diagonal_project(pat);
    let restricted = f.restrict(pat)?;
    for alpha in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let c = comparison_constants(alpha, pat);
        let middle = norm2(&f, weight(alpha));
        let reduced = norm1(&restricted, weight(2.0 * alpha));
        rec.at_most(c.c2 * reduced, middle, &format!("lower comparison {pat} at alpha = {alpha}"));
        rec.at_most(middle, c.c1 * reduced, &format!("upper comparison {pat} at alpha = {alpha}"));
    }
    Ok(())
}

/// `||f(., w)||_{D_alpha} <= ||k_w||_{D_alpha} ||f||_alpha` for `|w| <= 0.9`.
fn slice(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let f = random_twovar(rng);
    let radius = rng.random_range(0.0..=0.9);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let w = Complex64::from_polar(radius, angle);
    let alpha = rng.random_range(-2.0..=2.0);
    let a = weight(alpha);
    let kernel = kernel_norm_sq(a, w, 1e-14)?;
    let lhs = norm1(&f.slice(Variable::Z2, w)?, a);
    rec.at_most(lhs, kernel.sqrt() * norm2(&f, a), &format!("slice at |w| = {radius}, alpha = {alpha}"));
    Ok(())
}

/// `||L F||_alpha = ||F||_{D_{2 alpha}}` for the `(1, 1)` lift.
fn lift(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let big = random_onevar(rng);
    let lifted = TwoVarSeries::lift(&big, DiagonalPattern::DIAGONAL)?;
    for alpha in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        rec.equal(
            norm2(&lifted, weight(alpha)),
            norm1(&big, weight(2.0 * alpha)),
            1e-14,
            &format!("lift isometry at alpha = {alpha}"),
        );
    }
    Ok(())
}

/// `restrict(lift(F)) = F` for every pattern and `phi_inv(phi(s)) = s` on `[1, 1e6]`.
fn roundtrip(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let big = random_onevar(rng);
    let pat = random_pattern(rng);
    let back = TwoVarSeries::lift(&big, pat)?.restrict(pat)?;
    rec.holds(back == big, || format!("restrict after lift differs for {pat}"));

    let s = 10f64.powf(rng.random_range(0.0..=6.0));
    let a = weight(rng.random_range(-2.0..=1.0));
    let again = a.phi_inv(a.phi(s)?)?;
    rec.equal(again / s, 1.0, 1e-10, &format!("phi round trip at s = {s}, alpha = {}", a.alpha()));
    Ok(())
}

/// `f * reciprocal(f) = 1` on the truncation grid.
fn reciprocal(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let mut f = random_twovar(rng);
    // keep |a00| dominant so the reciprocal coefficients stay moderate
    f.set(0, 0, Complex64::new(4.0 * (f.deg1() + 1) as f64 * (f.deg2() + 1) as f64, 0.0));
    let (d1, d2) = (rng.random_range(0..=8), rng.random_range(0..=8));
    let b = f.reciprocal(d1, d2, 1e-12)?;
    let product = f.mul(&b)?.truncate(d1, d2)?;
    let err = (&product - &TwoVarSeries::one())
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    rec.equal(err, 0.0, 1e-12, "reciprocal identity");
    Ok(())
}
