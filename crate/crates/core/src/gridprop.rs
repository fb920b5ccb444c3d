//! Free propagation on a periodic grid by one spectral multiplication.
//!
//! The discrete momentum amplitude is
//!
//! ```text
//! φ(p_k) = dx / sqrt(2πħ) · Σ_j ψ(x_j) e^{−i p_k x_j / ħ},
//! x_j = x_min + j·dx,  p_k = 2πħ k / (M dx),  k ∈ [−M/2, M/2),
//! ```
//!
//! which approximates the continuous transform with the same sign and
//! normalization as the closed forms in [`crate::analytic`], phase included.
//! Free evolution multiplies `φ` by `e^{−ip²t/2mħ}`; there is no splitting
//! error because there is no potential.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::analytic::{sho_eigenfunction, sigma_x_sq};
use crate::error::{Error, Result};
use crate::params::{Displacement, PhysParams};

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 4096;

/// Default half-width of the domain in units of the final width `σ(t_max)`.
pub const DEFAULT_HALF_WIDTH: f64 = 40.0;

/// Largest `|ψ|` tolerated at either end of the grid.
pub const BOUNDARY_LIMIT: f64 = 1e-12;

// Momentum amplitudes of level n are negligible (below 1e-17 relative) beyond
// sqrt(2n+1) + 9 momentum scales.
const BANDWIDTH_MARGIN: f64 = 9.0;

/// A uniform periodic grid `x_min + j·dx`, `j < points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub dx: f64,
    pub points: usize,
}

impl GridSpec {
    /// Grid on `[x_min, x_max)` with `points` a power of two (at least 16).
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::Grid(format!("bad interval [{x_min}, {x_max})")));
        }
        if points < 16 || !points.is_power_of_two() {
            return Err(Error::Grid(format!(
                "point count must be a power of two >= 16, got {points}"
            )));
        }
        Ok(GridSpec {
            x_min,
            dx: (x_max - x_min) / points as f64,
            points,
        })
    }

    /// Covers the packet's path from `x₀` to `x₀ + p₀t_max/m` with a margin of
    /// [`DEFAULT_HALF_WIDTH`] final widths on each side.
    pub fn auto(params: &PhysParams, d: Displacement, t_max: f64, points: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(Error::Domain(format!(
                "t_max must be finite and non-negative, got {t_max}"
            )));
        }
        let margin = DEFAULT_HALF_WIDTH * sigma_x_sq(t_max, params).sqrt();
        let end = d.x0 + d.p0 * t_max / params.mass();
        GridSpec::new(d.x0.min(end) - margin, d.x0.max(end) + margin, points)
    }

    /// Symmetric grid `[−half_width, half_width)`.
    pub fn symmetric(half_width: f64, points: usize) -> Result<Self> {
        GridSpec::new(-half_width, half_width, points)
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.dx * self.points as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.points)
            .map(|j| self.x_min + j as f64 * self.dx)
            .collect()
    }

    pub fn dp(&self, params: &PhysParams) -> f64 {
        2.0 * PI * params.hbar() / (self.points as f64 * self.dx)
    }

    /// Momenta in FFT order: `0, dp, …, (M/2 − 1)dp, −(M/2)dp, …, −dp`.
    pub fn momenta_fft_order(&self, params: &PhysParams) -> Vec<f64> {
        let m = self.points as i64;
        let dp = self.dp(params);
        (0..m)
            .map(|k| (if k < m / 2 { k } else { k - m }) as f64 * dp)
            .collect()
    }

    /// Largest resolvable momentum `πħ/dx`.
    pub fn nyquist(&self, params: &PhysParams) -> f64 {
        PI * params.hbar() / self.dx
    }

    // The grid is periodic, so x_max is the same point as x_min.
    fn covers(&self, lo: f64, hi: f64) -> bool {
        let slack = 1e-9 * (self.x_max() - self.x_min);
        self.x_min <= lo + slack && self.x_max() >= hi - slack
    }
}

/// Samples of a wavefunction on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

fn plan(points: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(points)
    } else {
        planner.plan_fft_forward(points)
    }
}

impl GridWavefunction {
    pub fn from_samples(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != spec.points {
            return Err(Error::Dimension {
                expected: spec.points,
                found: samples.len(),
            });
        }
        if samples
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Domain("grid samples must be finite".into()));
        }
        Ok(GridWavefunction { spec, samples })
    }

    /// `e^{ip₀x/ħ}` times the oscillator ground state centred at `x₀`,
    /// normalized on the grid.
    ///
    /// Fails with [`Error::Grid`] unless the grid covers `x₀ ± 40σ₀` and its
    /// Nyquist momentum exceeds `|p₀| + 10 sqrt(ħmω)`.
    ///
    /// ```
    /// use wavespread::gridprop::{GridSpec, GridWavefunction};
    /// use wavespread::{Displacement, PhysParams};
    ///
    /// let params = PhysParams::unit();
    /// let spec = GridSpec::auto(&params, Displacement::default(), 0.0, 4096)?;
    /// let psi = GridWavefunction::init_gaussian(spec, &params, Displacement::default())?;
    /// let (norm, mean, var) = psi.moments();
    /// assert!((norm - 1.0).abs() < 1e-12 && mean.abs() < 1e-12 && (var - 0.5).abs() < 1e-10);
    /// # Ok::<(), wavespread::Error>(())
    /// ```
    pub fn init_gaussian(spec: GridSpec, params: &PhysParams, d: Displacement) -> Result<Self> {
        let sigma0 = params.sigma0_sq().sqrt();
        let reach = DEFAULT_HALF_WIDTH * sigma0;
        if !spec.covers(d.x0 - reach, d.x0 + reach) {
            return Err(Error::Grid(format!(
                "[{}, {}) does not cover x0 ± 40σ0 = [{}, {}]",
                spec.x_min,
                spec.x_max(),
                d.x0 - reach,
                d.x0 + reach
            )));
        }
        check_bandwidth(&spec, params, d.p0.abs(), 0)?;
        let samples = spec
            .positions()
            .into_iter()
            .map(|x| {
                let phase = Complex64::from_polar(1.0, d.p0 * x / params.hbar());
                phase * sho_eigenfunction(0, x - d.x0, params)
            })
            .collect();
        let mut gw = GridWavefunction { spec, samples };
        gw.normalize();
        Ok(gw)
    }

    /// The `n`th oscillator eigenstate, normalized on the grid.
    pub fn sho_eigenstate(spec: GridSpec, n: usize, params: &PhysParams) -> Result<Self> {
        let reach = DEFAULT_HALF_WIDTH * ((2 * n + 1) as f64 * params.sigma0_sq()).sqrt();
        if !spec.covers(-reach, reach) {
            return Err(Error::Grid(format!(
                "grid does not cover ±{reach} for level {n}"
            )));
        }
        check_bandwidth(&spec, params, 0.0, n)?;
        let samples = spec
            .positions()
            .into_iter()
            .map(|x| Complex64::new(sho_eigenfunction(n, x, params), 0.0))
            .collect();
        let mut gw = GridWavefunction { spec, samples };
        gw.normalize();
        Ok(gw)
    }

    fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            let s = 1.0 / norm.sqrt();
            self.samples.iter_mut().for_each(|v| *v *= s);
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn x_min(&self) -> f64 {
        self.spec.x_min
    }

    pub fn dx(&self) -> f64 {
        self.spec.dx
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn positions(&self) -> Vec<f64> {
        self.spec.positions()
    }

    /// `Σ|ψⱼ|² dx`.
    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spec.dx
    }

    /// Larger of `|ψ|` at the two ends of the grid.
    pub fn boundary_amplitude(&self) -> f64 {
        self.samples[0]
            .norm()
            .max(self.samples[self.samples.len() - 1].norm())
    }

    /// `(norm, ⟨x⟩, ⟨(x − ⟨x⟩)²⟩)` by discrete quadrature.
    pub fn moments(&self) -> (f64, f64, f64) {
        let xs = self.positions();
        let dx = self.spec.dx;
        let norm = self.norm();
        let mean = xs
            .iter()
            .zip(&self.samples)
            .map(|(x, v)| x * v.norm_sqr())
            .sum::<f64>()
            * dx
            / norm;
        let var = xs
            .iter()
            .zip(&self.samples)
            .map(|(x, v)| (x - mean) * (x - mean) * v.norm_sqr())
            .sum::<f64>()
            * dx
            / norm;
        (norm, mean, var)
    }

    /// Discrete momentum amplitudes in FFT order.
    pub fn momentum_amplitudes(&self, params: &PhysParams) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        plan(self.spec.points, false).process(&mut buf);
        let scale = self.spec.dx / (2.0 * PI * params.hbar()).sqrt();
        let momenta = self.spec.momenta_fft_order(params);
        buf.iter()
            .zip(&momenta)
            .map(|(v, p)| {
                v * scale * Complex64::from_polar(1.0, -p * self.spec.x_min / params.hbar())
            })
            .collect()
    }

    /// `(p, φ(p))` sorted by momentum.
    pub fn momentum_representation(&self, params: &PhysParams) -> Vec<(f64, Complex64)> {
        let amps = self.momentum_amplitudes(params);
        let momenta = self.spec.momenta_fft_order(params);
        let half = self.spec.points / 2;
        (half..self.spec.points)
            .chain(0..half)
            .map(|k| (momenta[k], amps[k]))
            .collect()
    }

    /// `(⟨p⟩, ⟨(p − ⟨p⟩)²⟩)` from the discrete momentum amplitudes.
    pub fn spectral_moments(&self, params: &PhysParams) -> (f64, f64) {
        let rep = self.momentum_representation(params);
        let norm: f64 = rep.iter().map(|(_, v)| v.norm_sqr()).sum();
        let mean = rep.iter().map(|(p, v)| p * v.norm_sqr()).sum::<f64>() / norm;
        let var = rep
            .iter()
            .map(|(p, v)| (p - mean) * (p - mean) * v.norm_sqr())
            .sum::<f64>()
            / norm;
        (mean, var)
    }
}

fn check_bandwidth(spec: &GridSpec, params: &PhysParams, p_offset: f64, n: usize) -> Result<()> {
    let reach = ((2 * n + 1) as f64).sqrt() + BANDWIDTH_MARGIN;
    let needed = p_offset + reach * params.momentum_scale();
    let nyquist = spec.nyquist(params);
    if nyquist < needed {
        return Err(Error::Grid(format!(
            "Nyquist momentum {nyquist} does not resolve momenta up to {needed}; use more points"
        )));
    }
    Ok(())
}

/// Evolves by `t` under `p²/2m`.
///
/// Fails with [`Error::Wraparound`] if the result has `|ψ| ≥ 1e-12` at
/// either end of the grid.
pub fn free_propagate(
    gw: &GridWavefunction,
    t: f64,
    params: &PhysParams,
) -> Result<GridWavefunction> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(gw.clone());
    }
    let spec = gw.spec;
    let mut buf = gw.samples.clone();
    plan(spec.points, false).process(&mut buf);
    let c = -t / (2.0 * params.mass() * params.hbar());
    let inv_m = 1.0 / spec.points as f64;
    for (v, p) in buf.iter_mut().zip(spec.momenta_fft_order(params)) {
        *v *= Complex64::from_polar(inv_m, c * p * p);
    }
    plan(spec.points, true).process(&mut buf);
    let out = GridWavefunction { spec, samples: buf };
    let edge = out.boundary_amplitude();
    if edge >= BOUNDARY_LIMIT {
        return Err(Error::Wraparound {
            amplitude: edge,
            limit: BOUNDARY_LIMIT,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{phi_pt, prob_p, psi_xt};

    fn unit() -> PhysParams {
        PhysParams::unit()
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(0.0, 1.0, 100).is_err());
        assert!(GridSpec::new(1.0, 0.0, 64).is_err());
        let s = GridSpec::new(-1.0, 1.0, 64).unwrap();
        assert_eq!(s.positions().len(), 64);
        assert!((s.x_max() - 1.0).abs() < 1e-15);
        let m = s.momenta_fft_order(&unit());
        assert_eq!(m[0], 0.0);
        assert!(m[32] < 0.0 && m[31] > 0.0);
    }

    #[test]
    fn coverage_and_bandwidth_are_enforced() {
        let params = unit();
        let narrow = GridSpec::symmetric(10.0, 4096).unwrap();
        assert!(matches!(
            GridWavefunction::init_gaussian(narrow, &params, Displacement::default()),
            Err(Error::Grid(_))
        ));
        let coarse = GridSpec::symmetric(40.0, 64).unwrap();
        assert!(matches!(
            GridWavefunction::init_gaussian(coarse, &params, Displacement::default()),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn vacuum_moments() {
        let params = unit();
        let spec = GridSpec::auto(&params, Displacement::default(), 0.0, 4096).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, Displacement::default()).unwrap();
        let (norm, mean, var) = gw.moments();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(mean.abs() < 1e-12);
        assert!((var - 0.5).abs() < 1e-10);
        let d = Displacement::new(2.0, 0.0).unwrap();
        let spec = GridSpec::auto(&params, d, 0.0, 4096).unwrap();
        let (_, mean, _) = GridWavefunction::init_gaussian(spec, &params, d)
            .unwrap()
            .moments();
        assert!((mean - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_mean_is_initial_momentum() {
        let params = PhysParams::new(1.3, 0.8, 1.1).unwrap();
        let d = Displacement::new(0.5, 1.5).unwrap();
        let spec = GridSpec::auto(&params, d, 0.0, 4096).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, d).unwrap();
        let (mean_p, var_p) = gw.spectral_moments(&params);
        assert!((mean_p - 1.5).abs() < 1e-10);
        assert!((var_p - 0.5 * params.hbar() * params.mass() * params.omega()).abs() < 1e-10);
    }

    #[test]
    fn zero_time_is_identity() {
        let params = unit();
        let spec = GridSpec::auto(&params, Displacement::default(), 1.0, 1024).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, Displacement::default()).unwrap();
        assert_eq!(free_propagate(&gw, 0.0, &params).unwrap(), gw);
    }

    #[test]
    fn variance_law_and_norm_conservation() {
        let params = unit();
        let spec = GridSpec::auto(&params, Displacement::default(), 1.0, 4096).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, Displacement::default()).unwrap();
        let out = free_propagate(&gw, 1.0, &params).unwrap();
        let (norm, _, var) = out.moments();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-8);
    }

    #[test]
    fn agrees_with_closed_form() {
        let params = unit();
        let d = Displacement::momentum(1.0).unwrap();
        let spec = GridSpec::auto(&params, d, 2.0, 4096).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, d).unwrap();
        let out = free_propagate(&gw, 2.0, &params).unwrap();
        let dev = out
            .positions()
            .iter()
            .zip(out.samples())
            .map(|(&x, v)| (v - psi_xt(x, 2.0, &params, 1.0)).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-8, "{dev}");
        let (_, mean_x, _) = out.moments();
        assert!((mean_x - 2.0).abs() < 1e-10);
        let (mean_p, var_p) = out.spectral_moments(&params);
        assert!((mean_p - 1.0).abs() < 1e-10);
        assert!((var_p - 0.5).abs() < 1e-10);
    }

    #[test]
    fn momentum_amplitude_matches_closed_form_with_phase() {
        let params = unit();
        let d = Displacement::momentum(1.0).unwrap();
        let spec = GridSpec::auto(&params, d, 1.0, 4096).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, d).unwrap();
        let out = free_propagate(&gw, 1.0, &params).unwrap();
        let before = gw.momentum_representation(&params);
        for ((p, v), (_, w)) in out.momentum_representation(&params).into_iter().zip(before) {
            assert!((v - phi_pt(p, 1.0, &params, 1.0)).norm() < 1e-10);
            assert!((v.norm_sqr() - prob_p(p, &params, 1.0)).abs() < 1e-10);
            assert!((v.norm_sqr() - w.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn wraparound_is_detected() {
        let params = unit();
        let spec = GridSpec::auto(&params, Displacement::default(), 0.0, 4096).unwrap();
        let gw = GridWavefunction::init_gaussian(spec, &params, Displacement::default()).unwrap();
        assert!(matches!(
            free_propagate(&gw, 50.0, &params),
            Err(Error::Wraparound { .. })
        ));
    }

    #[test]
    fn eigenstates_are_normalized() {
        let params = unit();
        let spec = GridSpec::symmetric(70.0, 4096).unwrap();
        for n in 0..3 {
            let gw = GridWavefunction::sho_eigenstate(spec, n, &params).unwrap();
            let (norm, mean, var) = gw.moments();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(mean.abs() < 1e-12);
            assert!((var - (n as f64 + 0.5)).abs() < 1e-10);
        }
    }
}
