//! Reference computations shared by integration tests, independent of the library solvers.

use num_complex::Complex64;

/// Sparse polynomial as `(k, l, coefficient)` triples.
pub type Terms = Vec<(usize, usize, Complex64)>;

pub fn weight(alpha: f64, k: usize, l: usize) -> f64 {
    (((k + 1) * (l + 1)) as f64).powf(alpha)
}

/// `<g, h>_alpha` for sparse polynomials, by pairing equal exponents.
pub fn inner(g: &Terms, h: &Terms, alpha: f64) -> Complex64 {
    let mut total = Complex64::default();
    for &(k, l, a) in g {
        for &(k2, l2, b) in h {
            if k == k2 && l == l2 {
                total += a * b.conj() * weight(alpha, k, l);
            }
        }
    }
    total
}

pub fn shift(f: &Terms, i: usize, j: usize) -> Terms {
    f.iter().map(|&(k, l, c)| (k + i, l + j, c)).collect()
}

/// Gaussian elimination with partial pivoting on a dense complex system.
pub fn gauss(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Vec<Complex64> {
    let size = rhs.len();
    for col in 0..size {
        let pivot = (col..size).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..size {
            let factor = m[row][col] / m[col][col];
            for c in col..size {
                let v = m[col][c];
                m[row][c] -= factor * v;
            }
            let v = rhs[col];
            rhs[row] -= factor * v;
        }
    }
    let mut x = vec![Complex64::default(); size];
    for row in (0..size).rev() {
        let mut acc = rhs[row];
        for c in row + 1..size {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// `dist^2(1, f P)` over the monomials in `basis`, from scratch.
pub fn brute_force_dist_sq(f: &Terms, basis: &[(usize, usize)], alpha: f64) -> f64 {
    let shifted: Vec<Terms> = basis.iter().map(|&(i, j)| shift(f, i, j)).collect();
    let one: Terms = vec![(0, 0, Complex64::new(1.0, 0.0))];
    let gram: Vec<Vec<Complex64>> = shifted
        .iter()
        .map(|row| shifted.iter().map(|col| inner(col, row, alpha)).collect())
        .collect();
    let rhs: Vec<Complex64> = shifted.iter().map(|row| inner(&one, row, alpha)).collect();
    let c = gauss(gram, rhs);
    // residual of p f - 1 accumulated on a dense grid
    let mut residual = std::collections::BTreeMap::new();
    residual.insert((0usize, 0usize), Complex64::new(-1.0, 0.0));
    for (coef, sh) in c.iter().zip(&shifted) {
        for &(k, l, v) in sh {
            *residual.entry((k, l)).or_default() += coef * v;
        }
    }
    residual.iter().map(|(&(k, l), v)| v.norm_sqr() * weight(alpha, k, l)).sum()
}

pub fn full_basis(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|k| (0..=n).map(move |l| (k, l))).collect()
}

/// `dist^2(1, (1 - z) P_n)` in the one-variable space with weights `(k+1)^gamma`.
pub fn one_minus_z_oracle(gamma: f64, n: usize) -> f64 {
    1.0 / (0..=n + 1).map(|k| ((k + 1) as f64).powf(-gamma)).sum::<f64>()
}
