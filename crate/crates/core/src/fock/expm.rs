//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant
//! (Higham 2005).

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

// Largest 1-norm for which the [13/13] approximant is accurate to unit roundoff.
const THETA13: f64 = 5.371_920_351_148_152;

/// Induced 1-norm (largest column sum of moduli).
pub fn norm1(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

fn lin3(
    c1: f64,
    a1: &Array2<Complex64>,
    c2: f64,
    a2: &Array2<Complex64>,
    c3: f64,
    a3: &Array2<Complex64>,
) -> Array2<Complex64> {
    let mut out = Array2::zeros(a1.raw_dim());
    Zip::from(&mut out)
        .and(a1)
        .and(a2)
        .and(a3)
        .for_each(|o, &x, &y, &z| {
            *o = x * c1 + y * c2 + z * c3;
        });
    out
}

/// Solves `A X = B` in place (`B` becomes `X`) by LU with partial pivoting.
pub(crate) fn solve_in_place(mut a: Array2<Complex64>, b: &mut Array2<Complex64>) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::Dimension {
            expected: n,
            found: b.nrows(),
        });
    }
    let m = b.ncols();
    let a_s = a.as_slice_mut().expect("standard layout");
    let b_s = b.as_slice_mut().expect("standard layout");
    for k in 0..n {
        let (mut piv, mut best) = (k, a_s[k * n + k].norm());
        for i in k + 1..n {
            let v = a_s[i * n + k].norm();
            if v > best {
                piv = i;
                best = v;
            }
        }
        if best == 0.0 {
            return domain("matrix_exp: singular Padé denominator");
        }
        if piv != k {
            for j in 0..n {
                a_s.swap(k * n + j, piv * n + j);
            }
            for j in 0..m {
                b_s.swap(k * m + j, piv * m + j);
            }
        }
        let inv = 1.0 / a_s[k * n + k];
        let (upper, lower) = a_s.split_at_mut((k + 1) * n);
        let pivot_row = &upper[k * n..(k + 1) * n];
        let (b_upper, b_lower) = b_s.split_at_mut((k + 1) * m);
        let b_pivot = &b_upper[k * m..(k + 1) * m];
        for (row, b_row) in lower.chunks_exact_mut(n).zip(b_lower.chunks_exact_mut(m)) {
            let f = row[k] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            row[k] = Complex64::new(0.0, 0.0);
            for (x, p) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                *x -= f * p;
            }
            for (x, p) in b_row.iter_mut().zip(b_pivot) {
                *x -= f * p;
            }
        }
    }
    for k in (0..n).rev() {
        let (head, tail) = b_s.split_at_mut((k + 1) * m);
        let row_k = &mut head[k * m..];
        for j in k + 1..n {
            let f = a_s[k * n + j];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row_j = &tail[(j - k - 1) * m..(j - k) * m];
            for (x, y) in row_k.iter_mut().zip(row_j) {
                *x -= f * y;
            }
        }
        let inv = 1.0 / a_s[k * n + k];
        row_k.iter_mut().for_each(|x| *x *= inv);
    }
    Ok(())
}

/// `exp(A)` for a square complex matrix with finite entries.
///
/// Relative accuracy is close to `‖A‖₁` times unit roundoff; the crate's
/// tests hold it to `1e-12` for `‖A‖₁ ≤ 50`.
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            found: a.ncols(),
        });
    }
    if a.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return domain("matrix_exp: non-finite entry");
    }
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    let norm = norm1(a);
    if norm == 0.0 {
        return Ok(identity(n));
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = if s > 0 {
        a * Complex64::new(2f64.powi(-s), 0.0)
    } else {
        a.to_owned()
    };

    let b = &PADE13;
    let a2 = scaled.dot(&scaled);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let inner_u = lin3(b[13], &a6, b[11], &a4, b[9], &a2);
    let mut u_poly = a6.dot(&inner_u);
    u_poly += &lin3(b[7], &a6, b[5], &a4, b[3], &a2);
    u_poly.diag_mut().iter_mut().for_each(|d| *d += b[1]);
    let u = scaled.dot(&u_poly);

    let inner_v = lin3(b[12], &a6, b[10], &a4, b[8], &a2);
    let mut v = a6.dot(&inner_v);
    v += &lin3(b[6], &a6, b[4], &a4, b[2], &a2);
    v.diag_mut().iter_mut().for_each(|d| *d += b[0]);

    let denom = &v - &u;
    let mut x = &v + &u;
    solve_in_place(denom.as_standard_layout().into_owned(), &mut x)?;
    for _ in 0..s {
        x = x.dot(&x);
    }
    Ok(x)
}
