//! Cross-checks between the Fock engine, the grid oracle and the closed forms.

use wavespread::analytic::{prob_x, sigma_x_sq};
use wavespread::fock::{
    apply, displacement_op, fock_state, free_evolution_op, operator_equality_chain,
    wavefunction_on_grid,
};
use wavespread::gridprop::{free_propagate, GridSpec, GridWavefunction};
use num_complex::Complex64;
use wavespread::{Displacement, PhysParams};

fn l2_density_gap(a: &[f64], b: &[f64], dx: f64) -> f64 {
    (a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>() * dx).sqrt()
}

#[test]
fn moving_packet_agrees_across_engines() {
    let params = PhysParams::unit();
    let d = Displacement::new(0.5, 1.0).unwrap();
    let t = 1.5;
    let spec = GridSpec::auto(&params, d, t, 4096).unwrap();
    let grid = free_propagate(
        &GridWavefunction::init_gaussian(spec, &params, d).unwrap(),
        t,
        &params,
    )
    .unwrap();

    let n = 256;
    let coherent = apply(
        &displacement_op(n, &params, d).unwrap(),
        &fock_state(n, 0).unwrap(),
    )
    .unwrap();
    assert!(coherent.converged);
    let evolved = apply(&free_evolution_op(n, &params, t).unwrap(), &coherent.value).unwrap();
    assert!(evolved.converged);

    let xs = grid.positions();
    let fock_density: Vec<f64> = wavefunction_on_grid(&evolved.value, &xs, &params)
        .value
        .iter()
        .map(|z| z.norm_sqr())
        .collect();
    let grid_density: Vec<f64> = grid.samples().iter().map(|z| z.norm_sqr()).collect();
    assert!(l2_density_gap(&fock_density, &grid_density, grid.dx()) < 1e-8);

    let closed: Vec<f64> = xs
        .iter()
        .map(|&x| prob_x(x - 0.5, t, &params, 1.0))
        .collect();
    assert!(l2_density_gap(&closed, &grid_density, grid.dx()) < 1e-10);
}

#[test]
fn second_excited_state_agrees_with_oracle() {
    let params = PhysParams::unit();
    let spec = GridSpec::symmetric(120.0, 8192).unwrap();
    let initial = GridWavefunction::sho_eigenstate(spec, 2, &params).unwrap();
    let n = 256;
    for t in [0.5, 1.0, 2.0] {
        let grid = free_propagate(&initial, t, &params).unwrap();
        let state = apply(
            &free_evolution_op(n, &params, t).unwrap(),
            &fock_state(n, 2).unwrap(),
        )
        .unwrap();
        assert!(state.converged);
        let fock: Vec<f64> = wavefunction_on_grid(&state.value, &grid.positions(), &params)
            .value
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        let oracle: Vec<f64> = grid.samples().iter().map(|z| z.norm_sqr()).collect();
        assert!(l2_density_gap(&fock, &oracle, grid.dx()) < 1e-8, "ωt = {t}");
        let (_, _, var) = grid.moments();
        assert!((var - 5.0 * sigma_x_sq(t, &params)).abs() < 1e-9);
    }
}

#[test]
fn non_unit_parameters_follow_the_variance_law() {
    let params = PhysParams::new(2.5, 0.4, 1.3).unwrap();
    let d = Displacement::default();
    let t_max = 6.0;
    let spec = GridSpec::auto(&params, d, t_max, 4096).unwrap();
    let initial = GridWavefunction::init_gaussian(spec, &params, d).unwrap();
    for t in [0.0, 1.0, 3.0, t_max] {
        let (norm, _, var) = free_propagate(&initial, t, &params).unwrap().moments();
        assert!((norm - 1.0).abs() < 1e-12);
        let expected = sigma_x_sq(t, &params);
        assert!(((var - expected) / expected).abs() < 1e-10, "t = {t}");
    }
}

#[test]
fn fock_results_are_stable_under_doubling() {
    let params = PhysParams::unit();
    let xs: Vec<f64> = (-60..=60).map(|i| 0.1 * i as f64).collect();
    let amplitudes = |n: usize| {
        let state = apply(
            &free_evolution_op(n, &params, 1.0).unwrap(),
            &fock_state(n, 1).unwrap(),
        )
        .unwrap();
        wavefunction_on_grid(&state.value, &xs, &params).value
    };
    let coarse = amplitudes(128);
    let fine = amplitudes(256);
    let gap = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(gap < 1e-12, "gap {gap}");

    for n in [64, 128] {
        assert!(
            operator_equality_chain(n, &params, 0.7)
                .unwrap()
                .max_residual()
                < 1e-10
        );
    }
}

// ψ₂(x,t) = (1+iωt)^{-1/2} e^{iωt x²/2(1+iωt)} (a† + c a)²|0⟩ / (√2 (1+iωt)²)
// with c = (iωt)², in units ħ = m = ω = 1. (a† + c a)²|0⟩ = √2|2⟩ + c|0⟩.
fn level_two_closed_form(x: f64, t: f64, c: Complex64) -> Complex64 {
    let z = Complex64::new(1.0, t);
    let norm = std::f64::consts::PI.powf(-0.25);
    let h0 = norm;
    let h2 = norm * (2.0 * x * x - 1.0) / 2f64.sqrt();
    // The oscillator Gaussian e^{-x²/2} merged with the chirp.
    let envelope = (-(x * x) / (2.0 * z)).exp();
    envelope * (2f64.sqrt() * h2 + c * h0) / (z.sqrt() * 2f64.sqrt() * z * z)
}

#[test]
fn second_level_coefficient_matches_oracle() {
    let params = PhysParams::unit();
    let spec = GridSpec::symmetric(120.0, 8192).unwrap();
    let initial = GridWavefunction::sho_eigenstate(spec, 2, &params).unwrap();
    for t in [0.5, 1.0, 2.0, 5.0] {
        let grid = free_propagate(&initial, t, &params).unwrap();
        let c = Complex64::new(0.0, t).powi(2);
        let gap = grid
            .positions()
            .iter()
            .zip(grid.samples())
            .map(|(&x, o)| (level_two_closed_form(x, t, c) - o).norm())
            .fold(0.0, f64::max);
        assert!(gap < 1e-10, "ωt = {t}: {gap}");
        // A different coefficient is clearly rejected.
        let wrong = Complex64::new(0.0, t);
        let off = grid
            .positions()
            .iter()
            .zip(grid.samples())
            .map(|(&x, o)| (level_two_closed_form(x, t, wrong) - o).norm())
            .fold(0.0, f64::max);
        assert!(off > 1e-3, "ωt = {t}");
    }
}
