use bidisk::analysis::{fit_power, DecaySeries, FitWindow};
use bidisk::approximants::{
    cesaro, diagonal_reduce_solve, residual_norm_sq, riesz_approximant, solve_optimal, BasisKind, BasisSpec,
    SolveOptions,
};
use bidisk::spaces::{
    beta_of_alpha, comparison_constants, inner1, inner2, kernel_norm_sq, norm1, norm1_sq, norm2, norm2_sq,
};
use bidisk::{AlphaWeight, DiagonalPattern, OneVarSeries, TwoVarSeries, Variable};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn onevar() -> impl Strategy<Value = OneVarSeries> {
    prop::collection::vec(complex(), 1..8).prop_map(|c| OneVarSeries::new(c).unwrap())
}

fn twovar() -> impl Strategy<Value = TwoVarSeries> {
    (0usize..6, 0usize..6).prop_flat_map(|(d1, d2)| {
        prop::collection::vec(complex(), (d1 + 1) * (d2 + 1))
            .prop_map(move |c| TwoVarSeries::new(d1, d2, c).unwrap())
    })
}

fn pattern() -> impl Strategy<Value = DiagonalPattern> {
    (1usize..=3, 1usize..=3).prop_map(|(m, n)| DiagonalPattern::new(m, n).unwrap())
}

fn w(alpha: f64) -> AlphaWeight {
    AlphaWeight::new(alpha).unwrap()
}

fn max_abs(f: &TwoVarSeries) -> f64 {
    f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

const SLACK: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_is_commutative_and_distributive(f in twovar(), g in twovar(), h in twovar()) {
        prop_assert!(max_abs(&(&f.mul(&g).unwrap() - &g.mul(&f).unwrap())) < 1e-13);
        let lhs = (&f + &g).mul(&h).unwrap();
        let rhs = &f.mul(&h).unwrap() + &g.mul(&h).unwrap();
        prop_assert!(max_abs(&(&lhs - &rhs)) < 1e-12);
    }

    #[test]
    fn reciprocal_inverts_on_the_grid(f in twovar(), d1 in 0usize..8, d2 in 0usize..8) {
        let mut f = f;
        f.set(0, 0, Complex64::new(2.0 * (f.coeffs().len() as f64), 0.0));
        let b = f.reciprocal(d1, d2, 1e-12).unwrap();
        let product = f.mul(&b).unwrap().truncate(d1, d2).unwrap();
        prop_assert!(max_abs(&(&product - &TwoVarSeries::one())) < 1e-12);
    }

    #[test]
    fn lift_then_restrict_is_identity(big in onevar(), pat in pattern()) {
        let lifted = TwoVarSeries::lift(&big, pat).unwrap();
        prop_assert!(lifted.is_diagonal(pat));
        prop_assert_eq!(lifted.restrict(pat).unwrap(), big);
    }

    #[test]
    fn norms_match_inner_products(f in twovar(), big in onevar(), alpha in -2.0..=2.0f64) {
        let a = w(alpha);
        let n2 = norm2_sq(&f, a);
        prop_assert!((inner2(&f, &f, a).re - n2).abs() <= 1e-14 * n2.max(1e-300));
        prop_assert!(inner2(&f, &f, a).im.abs() <= 1e-14 * n2.max(1e-300));
        let n1 = norm1_sq(&big, a);
        prop_assert!((inner1(&big, &big, a).re - n1).abs() <= 1e-14 * n1.max(1e-300));
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(f in twovar(), g in twovar(), alpha in -2.0..=2.0f64) {
        let a = w(alpha);
        let gap = inner2(&f, &g, a) - inner2(&g, &f, a).conj();
        prop_assert!(gap.norm() < 1e-12);
    }

    #[test]
    fn separable_norm_factors(g in onevar(), h in onevar(), alpha in -2.0..=2.0f64) {
        let a = w(alpha);
        let f = TwoVarSeries::separable(&g, &h).unwrap();
        let expected = norm1(&g, a) * norm1(&h, a);
        prop_assert!((norm2(&f, a) - expected).abs() <= 1e-12 * expected.max(1e-300));
    }

    #[test]
    fn lift_is_an_isometry(big in onevar(), alpha in prop::sample::select(vec![-1.0, -0.5, 0.0, 0.5, 1.0])) {
        let lifted = TwoVarSeries::lift(&big, DiagonalPattern::DIAGONAL).unwrap();
        let (lhs, rhs) = (norm2(&lifted, w(alpha)), norm1(&big, w(2.0 * alpha)));
        prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300));
    }

    #[test]
    fn comparison_is_two_sided(f in twovar(), pat in pattern(), alpha in -2.0..=2.0f64) {
        let f = f.diagonal_project(pat);
        let c = comparison_constants(alpha, pat);
        prop_assert!(0.0 < c.c2 && c.c2 <= c.c1);
        let reduced = norm1(&f.restrict(pat).unwrap(), w(2.0 * alpha));
        let middle = norm2(&f, w(alpha));
        prop_assert!(c.c2 * reduced <= middle * (1.0 + SLACK));
        prop_assert!(middle <= c.c1 * reduced * (1.0 + SLACK));
    }

    #[test]
    fn diagonal_restriction_contracts(
        f in twovar(),
        alpha in prop::sample::select(vec![-2.0, -1.0, 0.0, 1.0, 2.0]),
    ) {
        let lhs = norm1(&f.diag_restrict(), w(beta_of_alpha(alpha)));
        prop_assert!(lhs <= norm2(&f, w(alpha)) * (1.0 + SLACK));
    }

    #[test]
    fn slices_are_bounded_by_the_kernel(f in twovar(), r in 0.0..=0.9f64, t in 0.0..std::f64::consts::TAU, alpha in -2.0..=2.0f64) {
        let a = w(alpha);
        let wpt = Complex64::from_polar(r, t);
        let kernel = kernel_norm_sq(a, wpt, 1e-14).unwrap();
        let lhs = norm1(&f.slice(Variable::Z2, wpt).unwrap(), a);
        prop_assert!(lhs <= kernel.sqrt() * norm2(&f, a) * (1.0 + SLACK));
    }

    #[test]
    fn phi_inverts_on_the_upper_branch(log_s in 0.0..=6.0f64, alpha in -2.0..=1.0f64) {
        let a = w(alpha);
        let s = 10f64.powf(log_s);
        let back = a.phi_inv(a.phi(s).unwrap()).unwrap();
        prop_assert!((back - s).abs() <= 1e-10 * s);
    }

    #[test]
    fn phi_is_nondecreasing(s in 0.0..=1e3f64, ds in 0.0..=10.0f64, alpha in -2.0..=1.0f64) {
        let a = w(alpha);
        prop_assert!(a.phi(s).unwrap() <= a.phi(s + ds).unwrap());
    }

    #[test]
    fn projection_contracts(f in twovar(), pat in pattern(), alpha in -2.0..=2.0f64) {
        prop_assert!(norm2(&f.diagonal_project(pat), w(alpha)) <= norm2(&f, w(alpha)) * (1.0 + SLACK));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn optimum_beats_explicit_and_random_competitors(
        c in prop::collection::vec(complex(), 3),
        alpha in prop::sample::select(vec![-1.0, 0.0, 0.5, 1.0]),
        n in 0usize..4,
        seed in any::<u64>(),
    ) {
        // a00 = 1 dominates so 1/f has a convergent expansion
        let f = TwoVarSeries::from_terms(&[
            (0, 0, Complex64::new(1.0, 0.0)),
            (1, 0, c[0] * 0.3),
            (0, 1, c[1] * 0.3),
            (1, 1, c[2] * 0.3),
        ]).unwrap();
        let a = w(alpha);
        let opt = solve_optimal(&f, a, &BasisSpec::new(n, BasisKind::Full), &SolveOptions::default()).unwrap();
        let tol = 1e-10;
        let riesz = riesz_approximant(&f, a, n, 1e-12).unwrap();
        prop_assert!(opt.residual_sq <= residual_norm_sq(&riesz, &f, a).unwrap() + tol);
        let ces = cesaro(&f, n, 1e-12).unwrap();
        prop_assert!(opt.residual_sq <= residual_norm_sq(&ces, &f, a).unwrap() + tol);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let coeffs = (0..(n + 1) * (n + 1))
                .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
                .collect();
            let q = TwoVarSeries::new(n, n, coeffs).unwrap();
            prop_assert!(opt.residual_sq <= residual_norm_sq(&q, &f, a).unwrap() + tol);
        }
        prop_assert!((0.0..=1.0 + tol).contains(&opt.residual_sq));
    }

    #[test]
    fn residuals_are_nonincreasing_in_n(
        c in prop::collection::vec(complex(), 3),
        alpha in prop::sample::select(vec![-1.0, 0.0, 0.5]),
    ) {
        let f = TwoVarSeries::from_terms(&[
            (0, 0, Complex64::new(1.0, 0.0)),
            (1, 0, c[0]),
            (0, 1, c[1]),
            (1, 1, c[2]),
        ]).unwrap();
        let mut prev = f64::INFINITY;
        for n in 0..5 {
            let r = solve_optimal(&f, w(alpha), &BasisSpec::new(n, BasisKind::Full), &SolveOptions::default())
                .unwrap()
                .residual_sq;
            prop_assert!(r <= prev + 1e-10);
            prev = r;
        }
    }

    #[test]
    fn diagonal_reduction_matches_full_solve(
        c in prop::collection::vec(-1.0..=1.0f64, 2),
        pat in pattern(),
        alpha in prop::sample::select(vec![-1.0, 0.0, 0.5]),
        n in 0usize..6,
    ) {
        let f = TwoVarSeries::from_real_terms(&[
            (0, 0, 1.0),
            (pat.m(), pat.n(), c[0]),
            (2 * pat.m(), 2 * pat.n(), c[1]),
        ]).unwrap();
        let opts = SolveOptions::default();
        let full = solve_optimal(&f, w(alpha), &BasisSpec::new(n, BasisKind::Full), &opts).unwrap();
        let reduced = diagonal_reduce_solve(&f, w(alpha), n, pat, &opts).unwrap();
        prop_assert!((full.residual_sq - reduced.residual_sq).abs() <= 1e-9);
    }
}

#[test]
fn planted_exponents_survive_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for e in [-1.5, -1.0, -0.5, -0.25] {
        let exact = DecaySeries::from_points((10..=200).map(|n| (n, 3.0 * ((n + 1) as f64).powf(e))).collect())
            .unwrap();
        assert!((fit_power(&exact, FitWindow::default()).unwrap().exponent - e).abs() <= 1e-8);

        let noisy = DecaySeries::from_points(
            (10..=200)
                .map(|n| (n, 3.0 * ((n + 1) as f64).powf(e) * (1.0 + 0.01 * rng.random_range(-1.0..=1.0))))
                .collect(),
        )
        .unwrap();
        assert!((fit_power(&noisy, FitWindow::default()).unwrap().exponent - e).abs() <= 0.05);
    }
}
