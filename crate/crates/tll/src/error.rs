use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A potential specification violates the structural rules of the family
    /// (unsorted tables, out-of-range samples, bad exponents, ...).
    #[error("invalid potential spec: {0}")]
    InvalidSpec(String),

    /// Periodization with period <= 1 would let the range-1 support overlap
    /// its own images.
    #[error("unsupported period {0}: periodization needs integer length >= 2")]
    UnsupportedPeriod(i64),

    /// A value lies outside the domain it must belong to.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller passed data breaking a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// N < n+1: lower density below one, the closed forms do not apply.
    #[error("density below one: N = {n_particles} particles on [0, {n}] needs N >= n+1")]
    DensityBelowOne { n: u32, n_particles: u64 },

    /// Ring period of the configuration and the periodized potential differ.
    #[error("period mismatch: configuration ring length {config} vs potential period {potential}")]
    PeriodMismatch { config: i64, potential: i64 },

    /// Brute-force enumeration would exceed the combinatorial budget.
    #[error("enumeration budget exceeded: {count} grid multisets > {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    /// A measure fails the spectral module's normalization rules.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
