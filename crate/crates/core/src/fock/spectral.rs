//! Spectral decomposition of the truncated quadrature `a + a†`.
//!
//! In a number basis of dimension `N` the matrix `X = a + a†` is the Jacobi
//! matrix of the Hermite polynomials: zero diagonal, off-diagonal `sqrt(n)`.
//! Its eigenvalues are `sqrt(2)` times the Gauss–Hermite nodes of order `N` and
//! its eigenvectors are Hermite functions sampled at those nodes. Every
//! exponential of a function of `x̂` (or, after a diagonal phase change, of
//! `p̂`) is then `Q f(Λ) Qᵀ` with a real orthogonal `Q`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// Eigenpairs of the truncated `a + a†`.
#[derive(Debug, Clone)]
pub struct QuadratureSpectrum {
    /// Ascending eigenvalues.
    pub eigenvalues: Array1<f64>,
    /// Column `j` is the unit eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Array2<f64>,
}

// Number of eigenvalues of the Jacobi matrix strictly below `x` (Sturm count).
fn count_below(dim: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for n in 1..dim {
        let pivot = if d == 0.0 { f64::MIN_POSITIVE } else { d };
        d = -x - n as f64 / pivot;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect(dim: usize, index: usize, mut lo: f64, mut hi: f64) -> f64 {
    // Invariant: count_below(lo) <= index < count_below(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(dim, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn eigenvector(dim: usize, lambda: f64) -> Vec<f64> {
    // (X - λ)v = 0 row by row: sqrt(n+1) v_{n+1} = λ v_n - sqrt(n) v_{n-1}.
    let mut v = Vec::with_capacity(dim);
    v.push(1.0);
    if dim > 1 {
        v.push(lambda);
    }
    for n in 1..dim.saturating_sub(1) {
        let nf = n as f64;
        let next = (lambda * v[n] - nf.sqrt() * v[n - 1]) / (nf + 1.0).sqrt();
        v.push(next);
        if next.abs() > 1e150 {
            v.iter_mut().for_each(|x| *x *= 1e-150);
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    // Fix the sign so that the largest component is positive.
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let s = pivot.signum() / norm;
    v.iter_mut().for_each(|x| *x *= s);
    v
}

impl QuadratureSpectrum {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let bound = 2.0 * (dim as f64).sqrt() + 1.0;
        let mut eigenvalues = Array1::zeros(dim);
        for j in 0..dim {
            eigenvalues[j] = bisect(dim, j, -bound, bound);
        }
        // Exact antisymmetry of the spectrum.
        for j in 0..dim / 2 {
            let m = 0.5 * (eigenvalues[dim - 1 - j] - eigenvalues[j]);
            eigenvalues[j] = -m;
            eigenvalues[dim - 1 - j] = m;
        }
        if dim % 2 == 1 {
            eigenvalues[dim / 2] = 0.0;
        }
        let mut eigenvectors = Array2::zeros((dim, dim));
        for j in 0..dim {
            let v = eigenvector(dim, eigenvalues[j]);
            for (n, x) in v.into_iter().enumerate() {
                eigenvectors[[n, j]] = x;
            }
        }
        QuadratureSpectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q diag(f(λ)) Qᵀ`.
    pub fn function<F: Fn(f64) -> Complex64>(&self, f: F) -> Array2<Complex64> {
        let q = &self.eigenvectors;
        let vals: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut q_re = q.clone();
        let mut q_im = q.clone();
        for (j, v) in vals.iter().enumerate() {
            q_re.column_mut(j).mapv_inplace(|x| x * v.re);
            q_im.column_mut(j).mapv_inplace(|x| x * v.im);
        }
        let re = q_re.dot(&q.t());
        let im = q_im.dot(&q.t());
        let mut out = Array2::zeros(re.raw_dim());
        ndarray::Zip::from(&mut out)
            .and(&re)
            .and(&im)
            .for_each(|o, &r, &i| *o = Complex64::new(r, i));
        out
    }

    /// First `cols` columns of `Q diag(f(λ)) Qᵀ`.
    pub fn function_columns<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        cols: usize,
    ) -> Array2<Complex64> {
        let q = &self.eigenvectors;
        let dim = self.dim();
        let cols = cols.min(dim);
        let head = q.slice(ndarray::s![..cols, ..]);
        let mut q_re = q.clone();
        let mut q_im = q.clone();
        for j in 0..dim {
            let v = f(self.eigenvalues[j]);
            q_re.column_mut(j).mapv_inplace(|x| x * v.re);
            q_im.column_mut(j).mapv_inplace(|x| x * v.im);
        }
        let re = q_re.dot(&head.t());
        let im = q_im.dot(&head.t());
        let mut out = Array2::zeros((dim, cols));
        ndarray::Zip::from(&mut out)
            .and(&re)
            .and(&im)
            .for_each(|o, &r, &i| *o = Complex64::new(r, i));
        out
    }
}

/// Diagonal of `D = diag(iⁿ)`, which satisfies `D (a† − a) D⁻¹ = i (a† + a)`.
pub fn quarter_turn_phases(dim: usize) -> Vec<Complex64> {
    const PHASES: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    (0..dim).map(|n| PHASES[n % 4]).collect()
}
