//! Closed-form free evolution of the Gaussian packet and of oscillator Fock states.
//!
//! Every amplitude here is the result of acting with `e^{-ip̂²t/2mħ}` on a
//! displaced or excited state of the hidden oscillator fixed by
//! [`PhysParams`]. Complex square roots of `1 + iωt` use the principal
//! branch; for `t ≥ 0` the argument stays in the right half-plane.
//!
//! Momentum densities are computed from the modulus directly rather than as
//! `|amplitude|²`, which makes their time independence exact in floating point.

mod hermite;

pub use hermite::{
    hermite_function, hermite_functions, hermite_phys, sho_eigenfunction, sho_eigenfunctions,
    HERMITE_RAW_MAX_ORDER,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::params::PhysParams;

/// One sampled point of a wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionSample {
    /// Position or momentum.
    pub coordinate: f64,
    pub amplitude: Complex64,
    /// `|amplitude|²`, evaluated from its own closed form.
    pub density: f64,
}

fn one_plus_i_wt(t: f64, params: &PhysParams) -> Complex64 {
    Complex64::new(1.0, params.omega() * t)
}

/// Position-space amplitude of the freely evolved coherent state with initial
/// momentum `p0` and `x0 = 0`.
pub fn psi_xt(x: f64, t: f64, params: &PhysParams, p0: f64) -> Complex64 {
    let (m, w, hb) = (params.mass(), params.omega(), params.hbar());
    let z = one_plus_i_wt(t, params);
    let shift = x - t * p0 / m;
    let exponent = -m * w * shift * shift / (2.0 * hb * z)
        + Complex64::i() * (p0 * x / hb - t * p0 * p0 / (2.0 * hb * m));
    (m * w / (std::f64::consts::PI * hb)).powf(0.25) / z.sqrt() * exponent.exp()
}

/// Position density `|ψ(x,t)|²`, a Gaussian centred at `tp₀/m` with variance
/// [`sigma_x_sq`].
pub fn prob_x(x: f64, t: f64, params: &PhysParams, p0: f64) -> f64 {
    let (m, w, hb) = (params.mass(), params.omega(), params.hbar());
    let spread = 1.0 + w * w * t * t;
    let shift = x - t * p0 / m;
    (m * w / (std::f64::consts::PI * hb * spread)).sqrt()
        * (-m * w * shift * shift / (hb * spread)).exp()
}

/// `σ²(t) = (ħ/2mω)(1 + ω²t²)`.
pub fn sigma_x_sq(t: f64, params: &PhysParams) -> f64 {
    let w = params.omega();
    params.sigma0_sq() * (1.0 + w * w * t * t)
}

/// Both the amplitude and the density of [`psi_xt`].
pub fn position_sample(x: f64, t: f64, params: &PhysParams, p0: f64) -> WavefunctionSample {
    WavefunctionSample {
        coordinate: x,
        amplitude: psi_xt(x, t, params, p0),
        density: prob_x(x, t, params, p0),
    }
}

fn momentum_modulus(p: f64, params: &PhysParams, p0: f64) -> f64 {
    let s = params.hbar() * params.mass() * params.omega();
    let d = p - p0;
    (std::f64::consts::PI * s).powf(-0.25) * (-d * d / (2.0 * s)).exp()
}

fn free_phase(p: f64, t: f64, params: &PhysParams) -> Complex64 {
    Complex64::from_polar(1.0, -p * p * t / (2.0 * params.mass() * params.hbar()))
}

/// Momentum-space amplitude `φ(p,t)`. Only the phase depends on `t`.
pub fn phi_pt(p: f64, t: f64, params: &PhysParams, p0: f64) -> Complex64 {
    momentum_modulus(p, params, p0) * free_phase(p, t, params)
}

/// Momentum density `|φ(p,t)|²`; exactly independent of time.
pub fn prob_p(p: f64, params: &PhysParams, p0: f64) -> f64 {
    let r = momentum_modulus(p, params, p0);
    r * r
}

pub fn momentum_sample(p: f64, t: f64, params: &PhysParams, p0: f64) -> WavefunctionSample {
    let r = momentum_modulus(p, params, p0);
    WavefunctionSample {
        coordinate: p,
        amplitude: r * free_phase(p, t, params),
        density: r * r,
    }
}

/// `σ_p² = ħmω/2`, constant in time.
pub fn sigma_p_sq(params: &PhysParams) -> f64 {
    0.5 * params.hbar() * params.mass() * params.omega()
}

fn fock_momentum_modulus(n: usize, p: f64, params: &PhysParams) -> f64 {
    let s = params.momentum_scale();
    hermite_function(n, p / s) / s.sqrt()
}

/// Momentum amplitude of the `n`th Fock state after free flight for `t`:
/// `(πħmω)^{-1/4} (n! 2ⁿ)^{-1/2} Hₙ(p/sqrt(ħmω)) e^{-p²/2ħmω - ip²t/2ħm}`.
///
/// The conventional `(-i)ⁿ` of the momentum eigenfunctions is not included;
/// densities are unaffected.
pub fn phi_n_pt(n: usize, p: f64, t: f64, params: &PhysParams) -> Complex64 {
    fock_momentum_modulus(n, p, params) * free_phase(p, t, params)
}

/// `|φₙ(p,t)|²`; exactly independent of time.
pub fn prob_p_n(n: usize, p: f64, params: &PhysParams) -> f64 {
    let r = fock_momentum_modulus(n, p, params);
    r * r
}

pub fn momentum_n_sample(n: usize, p: f64, t: f64, params: &PhysParams) -> WavefunctionSample {
    let r = fock_momentum_modulus(n, p, params);
    WavefunctionSample {
        coordinate: p,
        amplitude: r * free_phase(p, t, params),
        density: r * r,
    }
}

/// Position amplitude of the first excited state after free evolution for `t`.
pub fn psi_1_xt(x: f64, t: f64, params: &PhysParams) -> Complex64 {
    let (m, w, hb) = (params.mass(), params.omega(), params.hbar());
    let z = one_plus_i_wt(t, params);
    (m * w / (std::f64::consts::PI * hb)).powf(0.25) / z.sqrt()
        * (2.0 * m * w / hb).sqrt()
        * (x / z)
        * (-m * w * x * x / (2.0 * hb * z)).exp()
}

/// `|ψ₁(x,t)|²`: the `n = 1` oscillator density with `x² → x²/(1+ω²t²)`.
pub fn prob_x_n1(x: f64, t: f64, params: &PhysParams) -> f64 {
    let (m, w, hb) = (params.mass(), params.omega(), params.hbar());
    let spread = 1.0 + w * w * t * t;
    (m * w / (std::f64::consts::PI * hb)).sqrt() / spread.sqrt()
        * (2.0 * m * w * x * x / (hb * spread))
        * (-m * w * x * x / (hb * spread)).exp()
}

pub fn position_n1_sample(x: f64, t: f64, params: &PhysParams) -> WavefunctionSample {
    WavefunctionSample {
        coordinate: x,
        amplitude: psi_1_xt(x, t, params),
        density: prob_x_n1(x, t, params),
    }
}
