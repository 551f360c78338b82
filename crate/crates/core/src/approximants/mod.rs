//! Optimal polynomial approximants to `1/f` and the explicit Riesz/Cesàro
//! constructions.
//!
//! The optimal approximant of order `n` minimizes `||p f - 1||_alpha` over a
//! finite monomial basis. It is computed from the Hermitian normal equations
//! ([`GramSystem`]); the reported residual is always recomputed from the
//! returned coefficients with explicit series arithmetic.

mod gram;
mod riesz;

pub use gram::{gram_assemble, GramSystem};
pub use riesz::{cesaro, closed_form_twisted, riesz_approximant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::{DiagonalPattern, TwoVarSeries};
use crate::spaces::{norm2_sq, AlphaWeight};

/// Shape of the polynomial family searched by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `z1^k z2^l`, `0 <= k, l <= n`.
    Full,
    /// `z1^{Mk} z2^{Nk}` with `Mk <= n`, `Nk <= n`.
    Diagonal(DiagonalPattern),
    /// `z1^k`, `0 <= k <= n`.
    OneVar,
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisKind::Full => write!(f, "full"),
            BasisKind::Diagonal(p) => write!(f, "diag:{},{}", p.m(), p.n()),
            BasisKind::OneVar => write!(f, "onevar"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    pub n: usize,
    pub kind: BasisKind,
}

impl BasisSpec {
    pub fn new(n: usize, kind: BasisKind) -> Self {
        Self { n, kind }
    }

    /// Basis exponents in lexicographic order, constant monomial first.
    pub fn indices(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        match self.kind {
            BasisKind::Full => (0..=n).flat_map(|k| (0..=n).map(move |l| (k, l))).collect(),
            BasisKind::Diagonal(p) => (0..=p.max_index(n, n)).map(|k| (p.m() * k, p.n() * k)).collect(),
            BasisKind::OneVar => (0..=n).map(|k| (k, 0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self.kind {
            BasisKind::Full => (self.n + 1) * (self.n + 1),
            BasisKind::Diagonal(p) => p.max_index(self.n, self.n) + 1,
            BasisKind::OneVar => self.n + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Largest admissible number of unknowns.
    pub max_unknowns: usize,
    /// Bound on `max_i |<p f - 1, m_i f>| / ||f||^2`.
    pub ortho_tol: f64,
    /// Ridge `lambda = ridge_factor * trace(G) / dim` on the retry.
    pub ridge_factor: f64,
    pub regularize: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_unknowns: 10_000,
            ortho_tol: 1e-8,
            ridge_factor: 1e-12,
            regularize: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproximantResult {
    pub p: TwoVarSeries,
    /// `||p f - 1||^2_alpha`, recomputed from `p`.
    pub residual_sq: f64,
    pub n: usize,
    pub basis_kind: BasisKind,
    pub cond_estimate: f64,
    /// `max_i |<p f - 1, m_i f>_alpha|` over the basis.
    pub ortho_residual: f64,
    /// Whether the ridge retry was needed.
    pub regularized: bool,
}

/// `||p f - 1||^2_alpha` by explicit multiplication.
pub fn residual_norm_sq(p: &TwoVarSeries, f: &TwoVarSeries, a: AlphaWeight) -> Result<f64> {
    Ok(norm2_sq(&residual(p, f)?, a))
}

fn residual(p: &TwoVarSeries, f: &TwoVarSeries) -> Result<TwoVarSeries> {
    Ok(&p.mul(f)? - &TwoVarSeries::one())
}

/// `max_i |<r, m_i f>_alpha|` for the basis exponents `basis`.
pub fn orthogonality_residual(
    r: &TwoVarSeries,
    f: &TwoVarSeries,
    a: AlphaWeight,
    basis: &[(usize, usize)],
) -> f64 {
    let support: Vec<_> = f.support().collect();
    let w1 = a.table(r.deg1());
    let w2 = a.table(r.deg2());
    basis
        .iter()
        .map(|&(i1, i2)| {
            let mut acc = Complex64::default();
            for &(s1, s2, fs) in &support {
                let (k, l) = (i1 + s1, i2 + s2);
                if k <= r.deg1() && l <= r.deg2() {
                    acc += r.coeff(k, l) * fs.conj() * (w1[k] * w2[l]);
                }
            }
            acc.norm()
        })
        .fold(0.0, f64::max)
}

fn polynomial_from_basis(basis: &[(usize, usize)], coeffs: &[Complex64]) -> Result<TwoVarSeries> {
    let d1 = basis.iter().map(|b| b.0).max().unwrap_or(0);
    let d2 = basis.iter().map(|b| b.1).max().unwrap_or(0);
    let mut p = TwoVarSeries::zeros(d1, d2)?;
    for (&(k, l), &c) in basis.iter().zip(coeffs) {
        p.set(k, l, c);
    }
    Ok(p)
}

fn certify(
    p: TwoVarSeries,
    f: &TwoVarSeries,
    a: AlphaWeight,
    spec: &BasisSpec,
    cond_estimate: f64,
    regularized: bool,
    opts: &SolveOptions,
) -> Result<ApproximantResult> {
    let r = residual(&p, f)?;
    let residual_sq = norm2_sq(&r, a);
    let ortho_residual = orthogonality_residual(&r, f, a, &spec.indices());
    let tol = opts.ortho_tol * norm2_sq(f, a);
    if !(ortho_residual <= tol) {
        return Err(Error::Certificate {
            residual: ortho_residual,
            tol,
        });
    }
    Ok(ApproximantResult {
        p,
        residual_sq,
        n: spec.n,
        basis_kind: spec.kind,
        cond_estimate,
        ortho_residual,
        regularized,
    })
}

/// Optimal approximant of order `spec.n` over the requested basis.
pub fn solve_optimal(
    f: &TwoVarSeries,
    a: AlphaWeight,
    spec: &BasisSpec,
    opts: &SolveOptions,
) -> Result<ApproximantResult> {
    let system = gram_assemble(f, a, spec, opts)?;
    let (coeffs, regularized) = system.solve(opts)?;
    let p = polynomial_from_basis(system.basis(), &coeffs)?;
    certify(p, f, a, spec, system.cond_estimate(), regularized, opts)
}

/// Optimal approximant of an `(M, N)`-diagonal `f` over the diagonal basis.
///
/// Projecting any competitor onto the pattern cannot increase the residual,
/// so this attains the optimum over the full basis. For `(1, 1)` the problem
/// is solved as a one-variable problem in `D_{2 alpha}` on the restriction
/// and lifted back, which is an isometry.
pub fn diagonal_reduce_solve(
    f: &TwoVarSeries,
    a: AlphaWeight,
    n: usize,
    pat: DiagonalPattern,
    opts: &SolveOptions,
) -> Result<ApproximantResult> {
    let restricted = f.restrict(pat)?;
    let spec = BasisSpec::new(n, BasisKind::Diagonal(pat));
    if !pat.is_identity() {
        return solve_optimal(f, a, &spec, opts);
    }
    let g = TwoVarSeries::from_z1(&restricted);
    let sub = solve_optimal(&g, a.doubled(), &BasisSpec::new(n, BasisKind::OneVar), opts)?;
    let q = sub.p.slice(crate::series::Variable::Z2, Complex64::default())?;
    let p = TwoVarSeries::lift(&q, pat)?;
    certify(p, f, a, &spec, sub.cond_estimate, sub.regularized, opts)
}

/// Smallest change `||(p + eps q) f - 1||^2 - residual_sq` over `trials`
/// random directions `q` drawn from the basis span (coefficients uniform in
/// the unit square). A negative value beyond rounding means `p` is not optimal.
pub fn perturbation_margin(
    f: &TwoVarSeries,
    a: AlphaWeight,
    result: &ApproximantResult,
    trials: usize,
    eps: f64,
    seed: u64,
) -> Result<f64> {
    let basis = BasisSpec::new(result.n, result.basis_kind).indices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margin = f64::INFINITY;
    for _ in 0..trials {
        let coeffs: Vec<Complex64> = basis
            .iter()
            .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
            .collect();
        let q = polynomial_from_basis(&basis, &coeffs)?;
        let moved = &result.p + &q.scale(Complex64::new(eps, 0.0));
        margin = margin.min(residual_norm_sq(&moved, f, a)? - result.residual_sq);
    }
    Ok(margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn re(terms: &[(usize, usize, f64)]) -> TwoVarSeries {
        TwoVarSeries::from_real_terms(terms).unwrap()
    }

    fn w(alpha: f64) -> AlphaWeight {
        AlphaWeight::new(alpha).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn twisted() -> TwoVarSeries {
        re(&[(0, 0, 1.0), (1, 1, -1.0)])
    }

    #[test]
    fn basis_ordering() {
        assert_eq!(
            BasisSpec::new(1, BasisKind::Full).indices(),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)]
        );
        let p = DiagonalPattern::new(2, 3).unwrap();
        assert_eq!(BasisSpec::new(7, BasisKind::Diagonal(p)).indices(), vec![(0, 0), (2, 3), (4, 6)]);
        assert_eq!(BasisSpec::new(7, BasisKind::Diagonal(p)).len(), 3);
        assert_eq!(BasisSpec::new(2, BasisKind::OneVar).indices(), vec![(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn gram_of_identity() {
        let g = gram_assemble(&TwoVarSeries::one(), w(0.3), &BasisSpec::new(0, BasisKind::Full), &SolveOptions::default())
            .unwrap();
        assert_eq!(g.entry(0, 0), c(1.0));
        assert_eq!(g.rhs(), &[c(1.0)]);
        assert_relative_eq!(g.cond_estimate(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn gram_of_one_minus_z() {
        let f = re(&[(0, 0, 1.0), (1, 0, -1.0)]);
        let g = gram_assemble(&f, w(0.0), &BasisSpec::new(1, BasisKind::OneVar), &SolveOptions::default()).unwrap();
        assert_eq!(g.entry(0, 0), c(2.0));
        assert_eq!(g.entry(0, 1), c(-1.0));
        assert_eq!(g.entry(1, 0), c(-1.0));
        assert_eq!(g.entry(1, 1), c(2.0));
        assert_eq!(g.rhs(), &[c(1.0), c(0.0)]);

        let g = gram_assemble(
            &twisted(),
            w(0.0),
            &BasisSpec::new(1, BasisKind::Diagonal(DiagonalPattern::DIAGONAL)),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(g.matrix(), &nalgebra::DMatrix::from_row_slice(2, 2, &[c(2.0), c(-1.0), c(-1.0), c(2.0)]));
        assert_eq!(g.rhs(), &[c(1.0), c(0.0)]);
        assert_relative_eq!(g.cond_estimate(), 3.0, max_relative = 1e-6);
    }

    #[test]
    fn gram_rhs_is_conjugated_constant() {
        let f = TwoVarSeries::from_terms(&[(0, 0, Complex64::new(1.0, 2.0)), (1, 0, c(0.5))]).unwrap();
        let g = gram_assemble(&f, w(0.0), &BasisSpec::new(1, BasisKind::Full), &SolveOptions::default()).unwrap();
        assert_eq!(g.rhs()[0], Complex64::new(1.0, -2.0));
        assert!(g.rhs()[1..].iter().all(|z| *z == Complex64::default()));
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert_eq!(g.entry(i, j), g.entry(j, i).conj());
            }
        }
    }

    #[test]
    fn gram_rejects_zero_and_oversize() {
        let opts = SolveOptions::default();
        assert!(gram_assemble(&TwoVarSeries::zeros(1, 1).unwrap(), w(0.0), &BasisSpec::new(1, BasisKind::Full), &opts)
            .is_err());
        assert!(matches!(
            gram_assemble(&twisted(), w(0.0), &BasisSpec::new(100, BasisKind::Full), &opts),
            Err(Error::SizeLimit { entries: 10201, limit: 10000 })
        ));
    }

    #[test]
    fn small_optima() {
        let opts = SolveOptions::default();
        let f = re(&[(0, 0, 1.0), (1, 0, -1.0)]);
        let r = solve_optimal(&f, w(0.0), &BasisSpec::new(0, BasisKind::OneVar), &opts).unwrap();
        assert_relative_eq!(r.p.coeff(0, 0).re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(r.residual_sq, 0.5, epsilon = 1e-15);

        let r = solve_optimal(&twisted(), w(0.0), &BasisSpec::new(1, BasisKind::Full), &opts).unwrap();
        assert_relative_eq!(r.residual_sq, 1.0 / 3.0, epsilon = 1e-14);

        for alpha in [-1.0, 0.0, 0.7] {
            for n in [0, 3] {
                let r = solve_optimal(&TwoVarSeries::one(), w(alpha), &BasisSpec::new(n, BasisKind::Full), &opts)
                    .unwrap();
                assert_eq!(r.residual_sq, 0.0);
                assert_eq!(r.p.coeff(0, 0), c(1.0));
            }
        }
    }

    #[test]
    fn diagonal_reduction_examples() {
        let opts = SolveOptions::default();
        let r = diagonal_reduce_solve(&twisted(), w(0.0), 5, DiagonalPattern::DIAGONAL, &opts).unwrap();
        assert_relative_eq!(r.residual_sq, 1.0 / 7.0, epsilon = 1e-13);
        assert!(r.p.is_diagonal(DiagonalPattern::DIAGONAL));

        let f = re(&[(0, 0, 1.0), (2, 1, -1.0)]);
        let r = diagonal_reduce_solve(&f, w(0.0), 2, DiagonalPattern::new(2, 1).unwrap(), &opts).unwrap();
        assert_relative_eq!(r.residual_sq, 1.0 / 3.0, epsilon = 1e-14);

        let r = diagonal_reduce_solve(&TwoVarSeries::one(), w(0.5), 9, DiagonalPattern::DIAGONAL, &opts).unwrap();
        assert_eq!(r.residual_sq, 0.0);

        let off = re(&[(0, 0, 1.0), (1, 0, -1.0)]);
        assert!(matches!(
            diagonal_reduce_solve(&off, w(0.0), 3, DiagonalPattern::DIAGONAL, &opts),
            Err(Error::PatternViolation { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let f = re(&[(0, 0, 1.0), (1, 0, -0.5), (0, 2, 0.25)]);
        assert_eq!(residual_norm_sq(&TwoVarSeries::zeros(0, 0).unwrap(), &f, w(0.4)).unwrap(), 1.0);
        let inverse = re(&[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]);
        let cube = re(&[(0, 0, 1.0), (3, 3, -1.0)]);
        let f = re(&[(0, 0, 1.0), (1, 1, -1.0)]);
        // (1 - z1 z2)(1 + z1 z2 + (z1 z2)^2) = 1 - (z1 z2)^3
        assert_relative_eq!(residual_norm_sq(&inverse, &f, w(0.0)).unwrap(), 1.0);
        assert_eq!(inverse.mul(&f).unwrap(), cube);
        let g = re(&[(0, 0, 2.0)]);
        assert_eq!(residual_norm_sq(&re(&[(0, 0, 0.5)]), &g, w(1.0)).unwrap(), 0.0);
    }

    #[test]
    fn certificate_enforced() {
        let opts = SolveOptions {
            ortho_tol: -1.0,
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve_optimal(&twisted(), w(0.0), &BasisSpec::new(1, BasisKind::Full), &opts),
            Err(Error::Certificate { .. })
        ));
    }

    #[test]
    fn perturbation_never_improves() {
        let opts = SolveOptions::default();
        let f = re(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 1.0)]);
        let r = solve_optimal(&f, w(-0.5), &BasisSpec::new(4, BasisKind::Full), &opts).unwrap();
        let margin = perturbation_margin(&f, w(-0.5), &r, 20, 1e-3, 11).unwrap();
        assert!(margin >= -1e-9, "margin {margin}");
    }
}
