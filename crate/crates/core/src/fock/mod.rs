//! Dense truncated Fock-space operators.
//!
//! Operators are `N × N` complex matrices in the number basis of the hidden
//! oscillator. Products of truncated ladder matrices differ from the true
//! operators only near the edge `n ≈ N`, so identities are checked on the
//! inner columns `n < N/2` (see [`FockOperator::inner_residual`]).
//!
//! Exponentials of functions of a single quadrature (free evolution, momentum
//! kicks) are evaluated through the eigen-decomposition of the truncated
//! `a + a†`; everything else goes through [`matrix_exp`].

mod dd;
mod expm;
mod spectral;
mod verify;

use std::ops::{Add, Mul, Sub};

use ndarray::{s, Array1, Array2, Zip};
use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::sho_eigenfunctions;
use crate::error::{domain, Error, Result};
use crate::params::{Displacement, PhysParams};

pub use expm::norm1;
pub use spectral::{quarter_turn_phases, QuadratureSpectrum};
pub use verify::{
    braiding_sweep, operator_equality_chain, verify_braiding, verify_disentangling,
    verify_vacuum_action, BraidingReport, DisentanglingReport, EqualityChain, VacuumActionReport,
};

/// Largest truncation accepted by the constructors.
pub const MAX_DIM: usize = 2048;

/// Default tail mass below which a state counts as converged.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

/// Default truncation.
pub const DEFAULT_DIM: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return domain(format!("truncation must be at least 2, got {dim}"));
    }
    if dim > MAX_DIM {
        return domain(format!("truncation {dim} exceeds the cap of {MAX_DIM}"));
    }
    Ok(())
}

fn max_abs<'a>(it: impl Iterator<Item = &'a Complex64>) -> f64 {
    it.map(|v| v.norm()).fold(0.0, f64::max)
}

/// A value computed in a truncated space, with the weight that leaked into
/// the outer half of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checked<T> {
    pub value: T,
    pub tail_mass: f64,
    pub converged: bool,
}

impl<T> Checked<T> {
    fn new(value: T, tail_mass: f64, tol: f64, what: &str) -> Self {
        let converged = tail_mass < tol;
        if !converged {
            log::warn!("{what}: truncation tail mass {tail_mass:e} exceeds {tol:e}; increase N");
        }
        Checked {
            value,
            tail_mass,
            converged,
        }
    }
}

/// Square complex matrix of dimension at least two with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    mat: Array2<Complex64>,
}

impl FockOperator {
    pub fn from_matrix(mat: Array2<Complex64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c {
            return Err(Error::Dimension {
                expected: r,
                found: c,
            });
        }
        check_dim(r)?;
        if mat.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return domain("operator has non-finite entries");
        }
        Ok(FockOperator {
            mat: mat.as_standard_layout().into_owned(),
        })
    }

    // Internal constructor for matrices already known to be valid.
    fn wrap(mat: Array2<Complex64>) -> Self {
        FockOperator { mat }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::wrap(Array2::from_diag_elem(dim, ONE)))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(
            self.mat
                .t()
                .mapv(|v| v.conj())
                .as_standard_layout()
                .into_owned(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::wrap(&self.mat * c)
    }

    /// `self + c·I`.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut m = self.mat.clone();
        m.diag_mut().iter_mut().for_each(|d| *d += c);
        Self::wrap(m)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &FockOperator) -> Self {
        &(self * other) - &(other * self)
    }

    /// `max |A − A†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.mat[[i, j]] - self.mat[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of `self − other` in the columns `n < N/2`.
    pub fn inner_residual(&self, other: &FockOperator) -> Result<f64> {
        self.same_dim(other)?;
        let half = self.dim() / 2;
        let a = self.mat.slice(s![.., ..half]);
        let b = other.mat.slice(s![.., ..half]);
        Ok(max_abs(
            Zip::from(&a).and(&b).map_collect(|x, y| x - y).iter(),
        ))
    }

    /// Largest entry of `self − c·I` in the columns `n < N/2`, restricted to
    /// rows `r < row_limit`.
    pub fn inner_identity_residual(&self, c: Complex64, row_limit: usize) -> f64 {
        let half = self.dim() / 2;
        let rows = row_limit.min(self.dim());
        let mut worst = 0.0f64;
        for i in 0..rows {
            for j in 0..half {
                let e = if i == j { c } else { ZERO };
                worst = worst.max((self.mat[[i, j]] - e).norm());
            }
        }
        worst
    }

    /// `max |(U†U − I)[m, n]|` over `m, n < N/2`.
    pub fn unitarity_residual_inner(&self) -> f64 {
        let half = self.dim() / 2;
        let cols = self.mat.slice(s![.., ..half]);
        let gram = cols.t().mapv(|v| v.conj()).dot(&cols);
        gram.indexed_iter()
            .map(|((i, j), v)| (v - if i == j { ONE } else { ZERO }).norm())
            .fold(0.0, f64::max)
    }

    fn same_dim(&self, other: &FockOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    /// Matrix product; panics on mismatched dimensions.
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        FockOperator::wrap(self.mat.dot(&rhs.mat))
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        FockOperator::wrap(&self.mat + &rhs.mat)
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        FockOperator::wrap(&self.mat - &rhs.mat)
    }
}

/// Amplitudes of a state in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: Array1<Complex64>,
}

impl FockState {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if amplitudes
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return domain("state has non-finite amplitudes");
        }
        Ok(FockState {
            amplitudes: Array1::from(amplitudes),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `Σ_{n ≥ N/2} |cₙ|²`.
    pub fn tail_mass(&self) -> f64 {
        self.amplitudes
            .iter()
            .skip(self.dim() / 2)
            .map(|c| c.norm_sqr())
            .sum()
    }

    pub fn is_converged(&self, tol: f64) -> bool {
        self.tail_mass() < tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Lowering operator `a` with `a[n−1, n] = sqrt(n)`.
pub fn ladder(dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    let mut m = Array2::zeros((dim, dim));
    for n in 1..dim {
        m[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(FockOperator::wrap(m))
}

/// `x̂ = sqrt(ħ/2mω)(a + a†)`.
pub fn position_op(dim: usize, params: &PhysParams) -> Result<FockOperator> {
    let a = ladder(dim)?;
    let s = (params.hbar() / (2.0 * params.mass() * params.omega())).sqrt();
    Ok((&a + &a.adjoint()).scale(Complex64::new(s, 0.0)))
}

/// `p̂ = sqrt(ħmω/2)(a − a†)/i`.
pub fn momentum_op(dim: usize, params: &PhysParams) -> Result<FockOperator> {
    let a = ladder(dim)?;
    let s = (0.5 * params.hbar() * params.mass() * params.omega()).sqrt();
    Ok((&a - &a.adjoint()).scale(Complex64::new(0.0, -s)))
}

/// `H = −(ħω/4)((a†)² − a†a − aa† + a²)`, built from truncated products.
pub fn free_hamiltonian(dim: usize, params: &PhysParams) -> Result<FockOperator> {
    let a = ladder(dim)?;
    let ad = a.adjoint();
    let y = &ad - &a;
    let c = -0.25 * params.hbar() * params.omega();
    Ok((&y * &y).scale(Complex64::new(c, 0.0)))
}

/// `exp(A)` by Padé scaling and squaring.
///
/// ```
/// use num_complex::Complex64;
/// use wavespread::fock::{ladder, matrix_exp};
///
/// let a = ladder(4)?;
/// // a is nilpotent on four levels: exp(a) stops after a³/3!.
/// let e = matrix_exp(&a)?;
/// assert!((e.matrix()[[0, 3]] - Complex64::new(6f64.sqrt() / 6.0, 0.0)).norm() < 1e-14);
/// # Ok::<(), wavespread::Error>(())
/// ```
pub fn matrix_exp(op: &FockOperator) -> Result<FockOperator> {
    expm::expm(&op.mat).map(FockOperator::wrap)
}

/// `D(x₀, p₀) = exp(−(i/ħ)(x₀p̂ − p₀x̂))`.
///
/// Accurate on the inner subspace when `N ≥ 16 + 8|α|²`.
pub fn displacement_op(dim: usize, params: &PhysParams, d: Displacement) -> Result<FockOperator> {
    let x = position_op(dim, params)?;
    let p = momentum_op(dim, params)?;
    let gen = &p.scale(Complex64::new(d.x0, 0.0)) - &x.scale(Complex64::new(d.p0, 0.0));
    matrix_exp(&gen.scale(Complex64::new(0.0, -1.0 / params.hbar())))
}

/// `S(ξ, η) = exp(−(ξ/2)(a†)² + (iη/2)(a†a + aa†) + (ξ*/2)a²)`.
pub fn squeeze_general(dim: usize, xi: Complex64, eta: f64) -> Result<FockOperator> {
    if !(xi.re.is_finite() && xi.im.is_finite() && eta.is_finite()) {
        return domain("squeeze parameters must be finite");
    }
    let a = ladder(dim)?;
    let ad = a.adjoint();
    let gen = &(&(&ad * &ad).scale(-xi / 2.0)
        + &(&(&ad * &a) + &(&a * &ad)).scale(Complex64::new(0.0, eta / 2.0)))
        + &(&a * &a).scale(xi.conj() / 2.0);
    matrix_exp(&gen)
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// `e^{−iHt/ħ}` for the truncated [`free_hamiltonian`].
///
/// Since `a† − a = D⁻¹ i(a + a†) D` with `D = diag(iⁿ)`, this equals
/// `D⁻¹ exp(−i(ωt/4)(a + a†)²) D` and is evaluated from the spectrum of
/// `a + a†`. For `ωt ≤ 4` the default `N = 256` keeps an evolved vacuum
/// converged.
pub fn free_evolution_op(dim: usize, params: &PhysParams, t: f64) -> Result<FockOperator> {
    check_dim(dim)?;
    check_time(t)?;
    let spectrum = QuadratureSpectrum::new(dim);
    Ok(free_evolution_from_spectrum(&spectrum, params.omega() * t))
}

pub(crate) fn free_evolution_from_spectrum(
    spectrum: &QuadratureSpectrum,
    omega_t: f64,
) -> FockOperator {
    let c = -0.25 * omega_t;
    let core = spectrum.function(|l| Complex64::from_polar(1.0, c * l * l));
    FockOperator::wrap(conjugate_by_phases(core))
}

// D⁻¹ M D with D = diag(iⁿ).
fn conjugate_by_phases(mut m: Array2<Complex64>) -> Array2<Complex64> {
    let d = quarter_turn_phases(m.nrows());
    for ((i, j), v) in m.indexed_iter_mut() {
        *v *= d[j] / d[i];
    }
    m
}

/// `e^{−iHt/ħ}` evaluated by [`matrix_exp`] on `−iHt/ħ`. Slower than
/// [`free_evolution_op`]; kept as the independent member of the equality
/// chain.
pub fn hamiltonian_evolution_op(dim: usize, params: &PhysParams, t: f64) -> Result<FockOperator> {
    check_time(t)?;
    let h = free_hamiltonian(dim, params)?;
    matrix_exp(&h.scale(Complex64::new(0.0, -t / params.hbar())))
}

/// `|n⟩` in dimension `N`; requires `n < N/2`.
pub fn fock_state(dim: usize, n: usize) -> Result<FockState> {
    check_dim(dim)?;
    if n >= dim / 2 {
        return domain(format!("Fock level {n} must lie below N/2 = {}", dim / 2));
    }
    let mut v = vec![ZERO; dim];
    v[n] = ONE;
    FockState::from_amplitudes(v)
}

/// `op |ψ⟩`, flagged when the result leaks into the outer half of the space.
pub fn apply(op: &FockOperator, state: &FockState) -> Result<Checked<FockState>> {
    if op.dim() != state.dim() {
        return Err(Error::Dimension {
            expected: op.dim(),
            found: state.dim(),
        });
    }
    let out = FockState {
        amplitudes: op.mat.dot(&state.amplitudes),
    };
    let tail = out.tail_mass();
    Ok(Checked::new(out, tail, DEFAULT_TAIL_TOLERANCE, "apply"))
}

/// `⟨ψ|op|ψ⟩`.
pub fn expectation(op: &FockOperator, state: &FockState) -> Result<Complex64> {
    if op.dim() != state.dim() {
        return Err(Error::Dimension {
            expected: op.dim(),
            found: state.dim(),
        });
    }
    let v = op.mat.dot(&state.amplitudes);
    Ok(state
        .amplitudes
        .iter()
        .zip(v.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `Σₙ cₙ ψₙ(x)` at each `x`, with ψₙ the oscillator eigenfunctions.
pub fn wavefunction_on_grid(
    state: &FockState,
    xs: &[f64],
    params: &PhysParams,
) -> Checked<Vec<Complex64>> {
    let n_max = state.dim() - 1;
    let c = &state.amplitudes;
    let values = xs
        .iter()
        .map(|&x| {
            sho_eigenfunctions(n_max, x, params)
                .iter()
                .zip(c.iter())
                .map(|(h, a)| a * *h)
                .sum()
        })
        .collect();
    Checked::new(
        values,
        state.tail_mass(),
        DEFAULT_TAIL_TOLERANCE,
        "wavefunction_on_grid",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{prob_x_n1, psi_xt};

    fn unit() -> PhysParams {
        PhysParams::unit()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_examples() {
        let a = ladder(8).unwrap();
        let vac = fock_state(8, 0).unwrap();
        let lowered = apply(&a, &vac).unwrap().value;
        assert!(lowered.norm() == 0.0);
        let raised = apply(&a.adjoint(), &vac).unwrap().value;
        assert_eq!(raised.amplitudes()[1], ONE);
        assert!(ladder(1).is_err());
        assert!(ladder(MAX_DIM + 1).is_err());
    }

    #[test]
    fn canonical_commutator_on_inner_space() {
        let a = ladder(32).unwrap();
        let comm = a.commutator(&a.adjoint());
        // Identity below the last level, up to sqrt(n)² rounding.
        assert!(comm.inner_identity_residual(ONE, 31) < 1e-14);
        let xp = position_op(32, &unit())
            .unwrap()
            .commutator(&momentum_op(32, &unit()).unwrap());
        assert!(xp.inner_identity_residual(c(0.0, 1.0), 31) < 1e-14);
    }

    #[test]
    fn quadratures_are_hermitian() {
        let p = PhysParams::new(2.0, 0.7, 1.3).unwrap();
        assert!(position_op(50, &p).unwrap().hermiticity_residual() < 1e-14);
        assert!(momentum_op(50, &p).unwrap().hermiticity_residual() < 1e-14);
        let x = position_op(16, &unit()).unwrap();
        let vac = fock_state(16, 0).unwrap();
        assert_eq!(expectation(&x, &vac).unwrap(), ZERO);
        assert!((expectation(&(&x * &x), &vac).unwrap() - 0.5).norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_matches_kinetic_energy() {
        let params = PhysParams::new(1.7, 0.6, 0.9).unwrap();
        let h = free_hamiltonian(64, &params).unwrap();
        let p = momentum_op(64, &params).unwrap();
        let t = (&p * &p).scale(c(0.5 / params.mass(), 0.0));
        assert!(h.inner_residual(&t).unwrap() < 1e-12);
        assert!(h.hermiticity_residual() < 1e-14);
        let vac = fock_state(64, 0).unwrap();
        let e = expectation(&free_hamiltonian(64, &unit()).unwrap(), &vac).unwrap();
        assert!((e - 0.25).norm() < 1e-15);
    }

    #[test]
    fn displacement_builds_coherent_state() {
        let params = unit();
        let id = displacement_op(16, &params, Displacement::default()).unwrap();
        assert_eq!(id, FockOperator::identity(16).unwrap());

        let n = 40;
        let d = displacement_op(n, &params, Displacement::momentum(1.0).unwrap()).unwrap();
        let state = apply(&d, &fock_state(n, 0).unwrap()).unwrap();
        assert!(state.converged);
        let alpha = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
        let mut expected = (-alpha.norm_sqr() / 2.0).exp();
        for (k, amp) in state.value.amplitudes().iter().take(n / 2).enumerate() {
            if k > 0 {
                expected /= (k as f64).sqrt();
            }
            let want = alpha.powu(k as u32) * expected;
            assert!((amp - want).norm() < 1e-8, "level {k}");
        }
        let x = position_op(n, &params).unwrap();
        let p = momentum_op(n, &params).unwrap();
        let mean_p = expectation(&p, &state.value).unwrap();
        let mean_x = expectation(&x, &state.value).unwrap();
        let var_x = expectation(&(&x * &x), &state.value).unwrap() - mean_x * mean_x;
        assert!((mean_p - 1.0).norm() < 1e-8);
        assert!(mean_x.norm() < 1e-8);
        assert!((var_x - 0.5).norm() < 1e-8);
    }

    #[test]
    fn squeezed_vacuum_position_variance() {
        let n = 128;
        let params = unit();
        assert_eq!(
            squeeze_general(8, ZERO, 0.0).unwrap(),
            FockOperator::identity(8).unwrap()
        );
        let s = squeeze_general(n, c(0.5, 0.0), 0.0).unwrap();
        let state = apply(&s, &fock_state(n, 0).unwrap()).unwrap();
        assert!(state.converged);
        // Brute force: reconstruct on a grid and integrate x²|ψ|².
        let h = 0.01;
        let xs: Vec<f64> = (0..=2000).map(|i| -10.0 + h * i as f64).collect();
        let psi = wavefunction_on_grid(&state.value, &xs, &params).value;
        let norm: f64 = psi.iter().map(|z| z.norm_sqr() * h).sum();
        let var: f64 = psi
            .iter()
            .zip(&xs)
            .map(|(z, x)| x * x * z.norm_sqr() * h)
            .sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!((var - 0.5 * (-1.0f64).exp()).abs() < 1e-8, "{var}");
        assert!((var - 0.18394).abs() < 1e-5);
    }

    #[test]
    fn spectral_and_pade_evolution_agree() {
        let params = PhysParams::new(1.0, 2.0, 1.0).unwrap();
        let a = free_evolution_op(96, &params, 0.5).unwrap();
        let b = hamiltonian_evolution_op(96, &params, 0.5).unwrap();
        assert!(a.inner_residual(&b).unwrap() < 1e-11);
        let id = free_evolution_op(12, &params, 0.0).unwrap();
        assert!(
            id.inner_residual(&FockOperator::identity(12).unwrap())
                .unwrap()
                < 1e-14
        );
        assert!(a.unitarity_residual_inner() < 1e-12);
    }

    #[test]
    fn evolved_vacuum_reconstructs_gaussian() {
        let params = unit();
        let n = 256;
        let u = free_evolution_op(n, &params, 0.5).unwrap();
        let state = apply(&u, &fock_state(n, 0).unwrap()).unwrap();
        assert!((state.value.norm() - 1.0).abs() < 1e-8);
        let xs: Vec<f64> = (0..=400).map(|i| -8.0 + 0.04 * i as f64).collect();
        let psi = wavefunction_on_grid(&state.value, &xs, &params);
        assert!(psi.converged);
        let err2: f64 = psi
            .value
            .iter()
            .zip(&xs)
            .map(|(z, &x)| (z - psi_xt(x, 0.5, &params, 0.0)).norm_sqr())
            .sum();
        assert!((err2 * 0.04).sqrt() < 1e-6);
    }

    #[test]
    fn evolved_first_excited_state_density() {
        let params = unit();
        let n = 256;
        let u = free_evolution_op(n, &params, 1.0).unwrap();
        let state = apply(&u, &fock_state(n, 1).unwrap()).unwrap().value;
        let xs: Vec<f64> = (0..=500).map(|i| -10.0 + 0.04 * i as f64).collect();
        let psi = wavefunction_on_grid(&state, &xs, &params).value;
        let err2: f64 = psi
            .iter()
            .zip(&xs)
            .map(|(z, &x)| (z.norm_sqr() - prob_x_n1(x, 1.0, &params)).powi(2))
            .sum();
        assert!((err2 * 0.04).sqrt() < 1e-6);
    }

    #[test]
    fn vacuum_reconstruction_is_ground_state() {
        let params = PhysParams::new(2.0, 1.5, 1.0).unwrap();
        let xs: Vec<f64> = (0..=200).map(|i| -3.0 + 0.03 * i as f64).collect();
        let psi = wavefunction_on_grid(&fock_state(8, 0).unwrap(), &xs, &params).value;
        let err2: f64 = psi
            .iter()
            .zip(&xs)
            .map(|(z, &x)| (z - psi_xt(x, 0.0, &params, 0.0)).norm_sqr())
            .sum();
        assert!((err2 * 0.03).sqrt() < 1e-10);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(fock_state(8, 4).is_err());
        assert!(fock_state(8, 3).is_ok());
        assert!(FockState::from_amplitudes(vec![ONE]).is_err());
        assert!(FockState::from_amplitudes(vec![ONE, c(f64::NAN, 0.0)]).is_err());
        assert!(FockOperator::from_matrix(Array2::zeros((2, 3))).is_err());
    }

    #[test]
    fn tail_mass_flags_unconverged_states() {
        let s = FockState::from_amplitudes(vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        assert_eq!(s.tail_mass(), 1.0);
        assert!(!s.is_converged(DEFAULT_TAIL_TOLERANCE));
        let checked = apply(&FockOperator::identity(4).unwrap(), &s).unwrap();
        assert!(!checked.converged);
    }
}
