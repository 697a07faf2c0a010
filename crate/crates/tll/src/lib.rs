//! Tower-lattice ground states of range-1 soft-core pair potentials in one
//! dimension.
//!
//! For nonnegative even pair potentials with u(0) = 1, u(x) >= 1 - |x| inside
//! the unit range and u = 0 outside, every ground state at lower density >= 1
//! is a lattice of particle towers with lattice constant 1 and heights
//! differing by at most one. This crate makes that statement executable:
//!
//! - [`potential`]: the potential family (overlap, step, power-law,
//!   tabulated), validation, periodization onto rings, Fourier transforms.
//! - [`config`]: configurations, tower constructors, the snap classifier,
//!   and the degenerate-family sampler for the overlap potential.
//! - [`energy`]: pair energies on intervals and rings with an exact
//!   cell-list fast path, windowed sums, energy per unit length.
//! - [`bounds`]: the closed-form ground energy E_n(N) = (n+1) C(m,2) + r m,
//!   the chain-decomposition lower bound, and a constructive audit of it.
//! - [`optimizer`]: brute-force and annealing searches whose results are
//!   certified against the lower bound, local-stability tests on rings, and
//!   a uniqueness probe.
//! - [`spectral`]: the quadratic functional I[mu] in real and Fourier space
//!   with the I[mu_0] = 1/2 minimality check.
//!
//! The `tll` binary exposes all of it as subcommands; the `examples/`
//! directory has one runnable example per capability.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod energy;
pub mod error;
pub mod optimizer;
pub mod potential;
pub mod spectral;

pub use config::{Configuration, Domain, TowerProfile};
pub use error::{Error, Result};
pub use potential::{PeriodizedPotential, PotentialSpec};

/// The four built-in family members used throughout the test suites:
/// overlap, step, PowerLaw(2), and a tabulated piecewise-linear sampling of
/// PowerLaw(2) (its chords stay above 1 - |x| by concavity).
pub fn built_in_potentials() -> Vec<PotentialSpec> {
    vec![
        PotentialSpec::overlap(),
        PotentialSpec::step(),
        PotentialSpec::power_law(2.0).expect("beta >= 1"),
        tabulated_example(),
    ]
}

/// PowerLaw(2) sampled every 0.1 across [-1, 1].
pub fn tabulated_example() -> PotentialSpec {
    let samples: Vec<(f64, f64)> = (-10..=10)
        .map(|i| {
            let x = i as f64 / 10.0;
            (x, 1.0 - x * x)
        })
        .collect();
    PotentialSpec::tabulated(samples).expect("valid table")
}
