//! Hermite polynomials and oscillator eigenfunctions.

use crate::error::{domain, Result};
use crate::params::PhysParams;

/// Highest order served by [`hermite_phys`]. Raw polynomial values grow like
/// `sqrt(2^n n!)`; past this order callers should use [`sho_eigenfunction`],
/// which never forms them.
pub const HERMITE_RAW_MAX_ORDER: usize = 64;

const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

// Rescale the unnormalized recurrence when it leaves this window.
const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_FACTOR: f64 = 1e-150;

/// Physicist's Hermite polynomial `Hₙ(y)` by the three-term recurrence
/// `Hₙ₊₁ = 2yHₙ − 2nHₙ₋₁`.
pub fn hermite_phys(n: usize, y: f64) -> Result<f64> {
    if n > HERMITE_RAW_MAX_ORDER {
        return domain(format!(
            "hermite_phys order {n} exceeds {HERMITE_RAW_MAX_ORDER}; use sho_eigenfunction for normalized high orders"
        ));
    }
    let (mut prev, mut cur) = (1.0, 2.0 * y);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Dimensionless Hermite functions `hₖ(y) = π^{-1/4} (2ᵏ k!)^{-1/2} Hₖ(y) e^{-y²/2}`
/// for `k = 0..=n_max`.
///
/// Uses `hₖ₊₁ = sqrt(2/(k+1)) y hₖ − sqrt(k/(k+1)) hₖ₋₁`. The Gaussian factor is
/// carried as a separate logarithm so that orders whose turning point lies
/// beyond `|y| ≈ 38` do not start from an underflowed zero.
pub fn hermite_functions(n_max: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let half_y2 = 0.5 * y * y;
    if half_y2 < 600.0 {
        let mut prev = PI_POW_NEG_QUARTER * (-half_y2).exp();
        out.push(prev);
        if n_max == 0 {
            return out;
        }
        let mut cur = std::f64::consts::SQRT_2 * y * prev;
        out.push(cur);
        for k in 1..n_max {
            let kf = k as f64;
            let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
            out.push(cur);
        }
        return out;
    }

    let mut log_scale = PI_POW_NEG_QUARTER.ln() - half_y2;
    let emit = |v: f64, log_scale: f64| -> f64 {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * (v.abs().ln() + log_scale).exp()
        }
    };
    let mut prev = 1.0;
    out.push(emit(prev, log_scale));
    if n_max == 0 {
        return out;
    }
    let mut cur = std::f64::consts::SQRT_2 * y;
    out.push(emit(cur, log_scale));
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev *= RESCALE_FACTOR;
            cur *= RESCALE_FACTOR;
            log_scale -= RESCALE_FACTOR.ln();
        }
        out.push(emit(cur, log_scale));
    }
    out
}

/// Single dimensionless Hermite function `hₙ(y)`.
pub fn hermite_function(n: usize, y: f64) -> f64 {
    hermite_functions(n, y)[n]
}

/// Oscillator eigenfunction `ψₙ(x) = (mω/ħ)^{1/4} hₙ(x sqrt(mω/ħ))`.
///
/// Stable for any order; the test suite covers `n ≤ 1024`.
pub fn sho_eigenfunction(n: usize, x: f64, params: &PhysParams) -> f64 {
    let l = params.length_scale();
    hermite_function(n, x / l) / l.sqrt()
}

/// All eigenfunctions `ψ₀(x) ..= ψ_{n_max}(x)` at one point.
pub fn sho_eigenfunctions(n_max: usize, x: f64, params: &PhysParams) -> Vec<f64> {
    let l = params.length_scale();
    let norm = 1.0 / l.sqrt();
    let mut v = hermite_functions(n_max, x / l);
    v.iter_mut().for_each(|h| *h *= norm);
    v
}
