use num_complex::Complex64;
use proptest::prelude::*;

use wavespread::algebra::{disentangle_factors, exp_simplified_squeeze_2x2, mat2_max_diff, Branch};
use wavespread::analytic::{prob_x, sigma_x_sq};
use wavespread::tof::InverseCdf;
use wavespread::PhysParams;

fn params() -> impl Strategy<Value = PhysParams> {
    (0.1f64..10.0, 0.1f64..10.0, 0.1f64..10.0)
        .prop_map(|(m, w, h)| PhysParams::new(m, w, h).unwrap())
}

proptest! {
    #[test]
    fn variance_grows_monotonically(p in params(), t1 in 0.0f64..5.0, dt in 0.01f64..5.0) {
        prop_assert!(sigma_x_sq(t1 + dt, &p) > sigma_x_sq(t1, &p));
    }

    #[test]
    fn density_is_normalized(p in params(), t in 0.0f64..3.0, p0 in -2.0f64..2.0) {
        let sigma = sigma_x_sq(t, &p).sqrt();
        let centre = p0 * t / p.mass();
        let n = 4000;
        let h = 24.0 * sigma / n as f64;
        let total: f64 = (0..=n)
            .map(|i| {
                let x = centre - 12.0 * sigma + i as f64 * h;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * prob_x(x, t, &p, p0)
            })
            .sum::<f64>() * h;
        prop_assert!((total - 1.0).abs() < 1e-10, "total {}", total);
    }

    #[test]
    fn reassembly_matches_exponential(re in -1.5f64..1.5, im in -1.5f64..1.5, plus in any::<bool>()) {
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let k = Complex64::new(re, im);
        if let Ok(f) = disentangle_factors(k, branch) {
            let d = mat2_max_diff(&f.reassemble_2x2(), &exp_simplified_squeeze_2x2(k, branch));
            prop_assert!(d < 1e-12, "k = {k}, diff {d}");
        }
    }

    #[test]
    fn inverse_cdf_is_monotone(u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
        let nodes: Vec<f64> = (0..=200).map(|i| -5.0 + 0.05 * i as f64).collect();
        let density: Vec<f64> = nodes.iter().map(|x| (-x * x / 2.0).exp()).collect();
        let inv = InverseCdf::new(nodes, density).unwrap();
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        prop_assert!(inv.sample(lo) <= inv.sample(hi));
    }
}
