//! Free expansion of a Gaussian wavepacket, computed as the squeezing of a
//! hidden harmonic oscillator whose ground state is the initial packet.
//!
//! The crate has four layers:
//!
//! * [`analytic`]: closed-form amplitudes and densities.
//! * [`algebra`]: the three-generator algebra and the disentangled form of
//!   `e^{ik(a† ± a)²}`.
//! * [`fock`]: dense truncated operators that check the identities at
//!   operator level.
//! * [`gridprop`]: an FFT propagator used as an independent oracle.
//!
//! [`tof`] simulates a time-of-flight momentum measurement on top of them.
//!
//! ```
//! use wavespread::{analytic, PhysParams};
//!
//! let params = PhysParams::unit();
//! // σ²(t) = σ²(0)(1 + ω²t²)
//! assert!((analytic::sigma_x_sq(2.0, &params) - 2.5).abs() < 1e-15);
//! ```

pub mod algebra;
pub mod analytic;
mod error;
pub mod fock;
pub mod gridprop;
pub mod params;
pub mod quad;
pub mod tof;

pub use error::{Error, Result};
pub use params::{Displacement, PhysParams};

// The guide's snippets run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hidden-oscillator.md")]
    mod hidden_oscillator {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/disentangling.md")]
    mod disentangling {}
    #[doc = include_str!("../../../book/src/fock-engine.md")]
    mod fock_engine {}
    #[doc = include_str!("../../../book/src/grid-oracle.md")]
    mod grid_oracle {}
    #[doc = include_str!("../../../book/src/time-of-flight.md")]
    mod time_of_flight {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
