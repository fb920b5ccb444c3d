//! Physical parameters and the width/frequency correspondence.
//!
//! A free Gaussian of position variance `σ²` is the ground state of a
//! harmonic oscillator with `ω = ħ/(2mσ²)`. That oscillator never appears in
//! the Hamiltonian; it only supplies ladder operators and a length scale.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Mass, oscillator frequency and action constant.
///
/// All three are strictly positive and finite. The default is the natural
/// unit system `ħ = m = ω = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct PhysParams {
    mass: f64,
    omega: f64,
    hbar: f64,
}

#[derive(Deserialize)]
struct RawParams {
    mass: f64,
    omega: f64,
    hbar: f64,
}

impl TryFrom<RawParams> for PhysParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        PhysParams::new(raw.mass, raw.omega, raw.hbar)
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be positive and finite, got {value}"))
    }
}

impl PhysParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("omega", omega)?;
        check_positive("hbar", hbar)?;
        let params = PhysParams { mass, omega, hbar };
        let s2 = params.sigma0_sq();
        if !(s2.is_finite() && s2 > 0.0) {
            return domain(format!(
                "ground-state variance hbar/(2 m omega) = {s2} is not positive"
            ));
        }
        Ok(params)
    }

    /// `ħ = m = ω = 1`.
    pub const fn unit() -> Self {
        PhysParams {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }

    /// Parameters whose hidden oscillator has ground-state width `sigma`.
    pub fn from_sigma(sigma: f64, mass: f64, hbar: f64) -> Result<Self> {
        PhysParams::new(mass, omega_from_sigma(sigma, mass, hbar)?, hbar)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Ground-state position variance `ħ/(2mω)`.
    pub fn sigma0_sq(&self) -> f64 {
        self.hbar / (2.0 * self.mass * self.omega)
    }

    /// Oscillator length `sqrt(ħ/(mω))`; positions divided by it are dimensionless.
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// Oscillator momentum `sqrt(ħmω)`.
    pub fn momentum_scale(&self) -> f64 {
        (self.hbar * self.mass * self.omega).sqrt()
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams::unit()
    }
}

/// Phase-space offset `(x₀, p₀)` of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Displacement {
    pub x0: f64,
    pub p0: f64,
}

impl Displacement {
    pub fn new(x0: f64, p0: f64) -> Result<Self> {
        if !(x0.is_finite() && p0.is_finite()) {
            return domain(format!("displacement must be finite, got ({x0}, {p0})"));
        }
        Ok(Displacement { x0, p0 })
    }

    /// Momentum kick only, the case used for the spreading packet.
    pub fn momentum(p0: f64) -> Result<Self> {
        Displacement::new(0.0, p0)
    }

    /// Coherent-state label `α = x₀ sqrt(mω/2ħ) + i p₀/sqrt(2ħmω)`.
    pub fn alpha(&self, params: &PhysParams) -> Complex64 {
        let (m, w, hb) = (params.mass(), params.omega(), params.hbar());
        Complex64::new(
            self.x0 * (m * w / (2.0 * hb)).sqrt(),
            self.p0 / (2.0 * hb * m * w).sqrt(),
        )
    }
}

/// `ω = ħ/(2mσ²)`: the oscillator whose ground state has width `sigma`.
pub fn omega_from_sigma(sigma: f64, mass: f64, hbar: f64) -> Result<f64> {
    check_positive("sigma", sigma)?;
    check_positive("mass", mass)?;
    check_positive("hbar", hbar)?;
    let omega = hbar / (2.0 * mass * sigma * sigma);
    check_positive("omega", omega)?;
    Ok(omega)
}

/// Inverse of [`omega_from_sigma`].
pub fn sigma_from_omega(omega: f64, mass: f64, hbar: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("mass", mass)?;
    check_positive("hbar", hbar)?;
    Ok((hbar / (2.0 * mass * omega)).sqrt())
}

/// Initial position variance `σ₀² = ħ/(2mω)`.
pub fn sigma_sq_initial(params: &PhysParams) -> f64 {
    params.sigma0_sq()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_from_sigma_examples() {
        let w = omega_from_sigma(0.5f64.sqrt(), 1.0, 1.0).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        assert_eq!(omega_from_sigma(1.0, 1.0, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn omega_from_sigma_si_fixture() {
        // 0.4 um packet of a 1.45e-25 kg atom; value from hbar/(2 m sigma^2) in f64.
        let w = omega_from_sigma(0.4e-6, 1.45e-25, 1.0546e-34).unwrap();
        assert!((w - 2_272.844_827_586_207_4).abs() < 1e-9, "{w}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(omega_from_sigma(0.0, 1.0, 1.0).is_err());
        assert!(omega_from_sigma(-1.0, 1.0, 1.0).is_err());
        assert!(omega_from_sigma(f64::NAN, 1.0, 1.0).is_err());
        assert!(omega_from_sigma(1.0, f64::INFINITY, 1.0).is_err());
        assert!(PhysParams::new(1.0, 0.0, 1.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, -2.0).is_err());
        assert!(Displacement::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn initial_variance_examples() {
        assert_eq!(sigma_sq_initial(&PhysParams::unit()), 0.5);
        assert_eq!(
            sigma_sq_initial(&PhysParams::new(1.0, 0.5, 1.0).unwrap()),
            1.0
        );
        assert_eq!(
            sigma_sq_initial(&PhysParams::new(2.0, 1.0, 1.0).unwrap()),
            0.25
        );
    }

    #[test]
    fn alpha_reduces_to_pure_momentum_label() {
        let p = PhysParams::new(1.3, 0.7, 0.9).unwrap();
        let d = Displacement::momentum(2.0).unwrap();
        let expected = 2.0 / (2.0 * 0.9 * 1.3 * 0.7f64).sqrt();
        let a = d.alpha(&p);
        assert_eq!(a.re, 0.0);
        assert!((a.im - expected).abs() < 1e-15);
    }

    #[test]
    fn deserialize_validates() {
        use serde::de::value::{Error as DeError, MapDeserializer};
        let parse = |omega: f64| {
            let entries = vec![("mass", 1.0f64), ("omega", omega), ("hbar", 1.0)];
            PhysParams::deserialize(MapDeserializer::<_, DeError>::new(entries.into_iter()))
        };
        assert_eq!(parse(2.0).unwrap().omega(), 2.0);
        assert!(parse(-2.0).is_err());
    }
}
