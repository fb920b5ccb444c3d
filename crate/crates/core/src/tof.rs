//! Time-of-flight momentum measurement.
//!
//! A particle prepared in oscillator level `n` at the origin flies freely for
//! `t`; its detected position `x` is read as the momentum `p = mx/t`. The
//! position density at time `t` is the momentum density stretched by `t/m`
//! plus the initial spread, so the inferred variance exceeds the true one by
//! the factor `1 + 1/(ωt)²`.
//!
//! Positions are drawn by inverse-CDF sampling of the time-`t` density,
//! tabulated on [`CDF_NODES`] nodes over `±40 sqrt(2n+1) σ(t)`. Levels 0 and 1 use the
//! closed forms; level 2 uses the grid propagator.
//!
//! Random numbers come from ChaCha20. Sample `i` belongs to block
//! `i / BLOCK_SIZE`, drawn from stream `block` of a generator seeded with the
//! run seed, so a run is identical for any number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{prob_x, prob_x_n1, sigma_x_sq};
use crate::error::{domain, Error, Result};
use crate::gridprop::{free_propagate, GridSpec, GridWavefunction, DEFAULT_HALF_WIDTH};
use crate::params::PhysParams;

/// Nodes of the tabulated cumulative distribution.
pub const CDF_NODES: usize = 1 << 14;

/// Samples per random stream.
pub const BLOCK_SIZE: usize = 4096;

/// Generator identification recorded in run metadata.
pub const RNG_ID: &str =
    "ChaCha20 (rand_chacha 0.3, rand 0.8 gen::<f64>), stream = sample_index / 4096";

// Largest propagation grid used for the level-2 density.
const MAX_ORACLE_POINTS: usize = 1 << 22;

/// Highest supported Fock level.
pub const MAX_LEVEL: usize = 2;

/// One simulated measurement campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TofRun {
    pub n: usize,
    pub flight_time: f64,
    pub sample_count: usize,
    pub seed: u64,
    pub inferred_momenta: Vec<f64>,
}

fn check_level(n: usize) -> Result<()> {
    if n > MAX_LEVEL {
        return domain(format!(
            "time of flight supports levels 0..={MAX_LEVEL}, got {n}"
        ));
    }
    Ok(())
}

fn check_flight_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return domain(format!("flight time must be positive and finite, got {t}"));
    }
    Ok(())
}

/// Position density of level `n` after flight time `t` on the tabulation
/// nodes `−L + j·dx`, `j < CDF_NODES`, with `L = 40 sqrt(2n+1) σ(t)`.
/// Returns `(nodes, density)`.
pub fn position_density_table(
    n: usize,
    t: f64,
    params: &PhysParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_level(n)?;
    check_flight_time(t)?;
    let half = DEFAULT_HALF_WIDTH * ((2 * n + 1) as f64 * sigma_x_sq(t, params)).sqrt();
    let spec = GridSpec::symmetric(half, CDF_NODES)?;
    let xs = spec.positions();
    let density = match n {
        0 => xs.iter().map(|&x| prob_x(x, t, params, 0.0)).collect(),
        1 => xs.iter().map(|&x| prob_x_n1(x, t, params)).collect(),
        _ => oracle_density(n, t, half, params)?,
    };
    Ok((xs, density))
}

// Grid-propagated density on the CDF nodes. The propagation grid is refined
// by powers of two until it resolves the initial momentum spread, then
// subsampled.
fn oracle_density(n: usize, t: f64, half: f64, params: &PhysParams) -> Result<Vec<f64>> {
    let mut points = CDF_NODES;
    let gw = loop {
        let spec = GridSpec::symmetric(half, points)?;
        match GridWavefunction::sho_eigenstate(spec, n, params) {
            Ok(gw) => break gw,
            Err(Error::Grid(_)) if points < MAX_ORACLE_POINTS => points *= 2,
            Err(e) => return Err(e),
        }
    };
    let out = free_propagate(&gw, t, params)?;
    Ok(out
        .samples()
        .iter()
        .step_by(points / CDF_NODES)
        .map(|v| v.norm_sqr())
        .collect())
}

/// Inverse of the cumulative distribution of a density tabulated on a uniform
/// grid, taking the density as linear between nodes.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    nodes: Vec<f64>,
    density: Vec<f64>,
    cumulative: Vec<f64>,
}

impl InverseCdf {
    pub fn new(nodes: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != density.len() {
            return domain("inverse CDF needs at least two nodes and one density value per node");
        }
        if density.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return domain("density must be finite and non-negative");
        }
        let mut cumulative = Vec::with_capacity(nodes.len());
        cumulative.push(0.0);
        for i in 1..nodes.len() {
            let h = nodes[i] - nodes[i - 1];
            if !(h > 0.0) {
                return domain("nodes must be strictly increasing");
            }
            cumulative.push(cumulative[i - 1] + 0.5 * h * (density[i - 1] + density[i]));
        }
        let total = *cumulative.last().expect("non-empty");
        if !(total > 0.0) {
            return domain("density has zero mass");
        }
        cumulative.iter_mut().for_each(|c| *c /= total);
        let density = density.into_iter().map(|d| d / total).collect();
        Ok(InverseCdf {
            nodes,
            density,
            cumulative,
        })
    }

    /// The `x` with `F(x) = u` for `u ∈ [0, 1)`.
    pub fn sample(&self, u: f64) -> f64 {
        let i = self
            .cumulative
            .partition_point(|&c| c <= u)
            .clamp(1, self.nodes.len() - 1)
            - 1;
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let (f0, f1) = (self.density[i], self.density[i + 1]);
        let r = u - self.cumulative[i];
        // Solve f0 s + (f1 − f0) s² / (2h) = r for s ∈ [0, h].
        let slope = (f1 - f0) / h;
        let s = if slope.abs() * h < 1e-12 * f0.max(f1) || slope == 0.0 {
            if f0 > 0.0 {
                r / f0
            } else {
                0.5 * h
            }
        } else {
            let disc = (f0 * f0 + 2.0 * slope * r).max(0.0);
            // Stable root of (slope/2) s² + f0 s − r = 0.
            2.0 * r / (f0 + disc.sqrt())
        };
        x0 + s.clamp(0.0, h)
    }
}

/// `count` detector positions for level `n` after flight time `t`.
///
/// ```
/// use wavespread::{tof, PhysParams};
///
/// let a = tof::sample_positions(0, 1.0, 1000, 7, &PhysParams::unit())?;
/// let b = tof::sample_positions(0, 1.0, 1000, 7, &PhysParams::unit())?;
/// assert_eq!(a, b);
/// # Ok::<(), wavespread::Error>(())
/// ```
pub fn sample_positions(
    n: usize,
    t: f64,
    count: usize,
    seed: u64,
    params: &PhysParams,
) -> Result<Vec<f64>> {
    let (nodes, density) = position_density_table(n, t, params)?;
    let inv = InverseCdf::new(nodes, density)?;
    Ok(sample_inverse_cdf(&inv, count, seed))
}

/// Draws `count` samples from `inv` with the block-stream scheme described in
/// the module documentation.
pub fn sample_inverse_cdf(inv: &InverseCdf, count: usize, seed: u64) -> Vec<f64> {
    let blocks = count.div_ceil(BLOCK_SIZE);
    let chunks: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let len = BLOCK_SIZE.min(count - b * BLOCK_SIZE);
            (0..len).map(|_| inv.sample(rng.gen::<f64>())).collect()
        })
        .collect();
    chunks.concat()
}

/// `p = m x / t`, taking the trap centre as the origin.
pub fn infer_momenta(positions: &[f64], t: f64, params: &PhysParams) -> Result<Vec<f64>> {
    check_flight_time(t)?;
    let s = params.mass() / t;
    Ok(positions.iter().map(|x| s * x).collect())
}

/// Relative excess of the inferred-momentum variance over the true one,
/// `1/(ωt)²`. The same for every level.
pub fn tof_systematic_error(t: f64, params: &PhysParams) -> Result<f64> {
    check_flight_time(t)?;
    let wt = params.omega() * t;
    Ok(1.0 / (wt * wt))
}

/// `(2n+1)(ħmω/2)(1 + 1/(ωt)²)`.
pub fn expected_inferred_variance(n: usize, t: f64, params: &PhysParams) -> Result<f64> {
    check_level(n)?;
    let excess = tof_systematic_error(t, params)?;
    Ok((2 * n + 1) as f64 * 0.5 * params.hbar() * params.mass() * params.omega() * (1.0 + excess))
}

/// Samples, infers momenta and packages the result.
pub fn run(n: usize, t: f64, count: usize, seed: u64, params: &PhysParams) -> Result<TofRun> {
    if count == 0 {
        return domain("sample count must be positive");
    }
    let positions = sample_positions(n, t, count, seed, params)?;
    Ok(TofRun {
        n,
        flight_time: t,
        sample_count: count,
        seed,
        inferred_momenta: infer_momenta(&positions, t, params)?,
    })
}

/// Cumulative distribution of `|φₙ(p)|²` for `n ≤ 2`, with `y = p/sqrt(ħmω)`.
pub fn momentum_cdf(n: usize, p: f64, params: &PhysParams) -> Result<f64> {
    check_level(n)?;
    let y = p / params.momentum_scale();
    let base = 0.5 * (1.0 + libm::erf(y));
    let g = (-y * y).exp() / std::f64::consts::PI.sqrt();
    Ok(match n {
        0 => base,
        1 => base - y * g,
        _ => base - 0.5 * (2.0 * y * y * y + y) * g,
    })
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// 99% critical value `1.63/sqrt(count)` of the KS distance.
pub fn ks_floor(count: usize) -> f64 {
    1.63 / (count as f64).sqrt()
}

/// Fixed-width histogram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// `bins` equal bins on `[lo, hi)`; values outside are dropped.
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return domain("histogram needs at least one bin and hi > lo");
        }
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for &v in values {
            if v >= lo && v < hi {
                let i = (((v - lo) / width) as usize).min(bins - 1);
                counts[i] += 1;
            }
        }
        Ok(Histogram { edges, counts })
    }

    /// Index of the bin containing `x`.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let i = self.edges.partition_point(|&e| e <= x);
        (i >= 1 && i < self.edges.len()).then(|| i - 1)
    }
}

/// Sample mean, variance and the 3σ Monte Carlo half-width of the variance,
/// `3 sqrt((μ₄ − σ⁴)/N)`.
pub fn variance_with_band(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    (mean, var, 3.0 * ((m4 - var * var).max(0.0) / n).sqrt())
}
