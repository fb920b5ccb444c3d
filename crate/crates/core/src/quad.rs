//! Composite Simpson quadrature for moment and normalization checks.

/// Integrates `f` over `[a, b]` with `intervals` Simpson panels (rounded up
/// to an even count).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2) + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Normalization, mean and variance of a density sampled by `f`.
pub fn density_moments<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    intervals: usize,
) -> (f64, f64, f64) {
    let norm = simpson(&f, a, b, intervals);
    let mean = simpson(|x| x * f(x), a, b, intervals) / norm;
    let var = simpson(|x| (x - mean) * (x - mean) * f(x), a, b, intervals) / norm;
    (norm, mean, var)
}
