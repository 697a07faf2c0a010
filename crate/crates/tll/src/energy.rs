//! Total pair energy U(x)_N = sum_{i<j} u(x_i - x_j) on intervals and rings,
//! with a unit-width cell-list fast path (exact: the interaction range is 1),
//! windowed sums for local-stability tests, and energy per unit length.

use serde::Serialize;

use crate::config::{Configuration, Domain, TowerProfile};
use crate::error::{Error, Result};
use crate::potential::{minimal_image, PeriodizedPotential, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Naive,
    CellList,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub total: f64,
    pub pair_count_nonzero: u64,
    pub method: Method,
}

fn check_sorted(positions: &[f64]) -> Result<()> {
    if positions.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Contract("positions must be sorted".into()));
    }
    Ok(())
}

/// Total energy on an interval domain via the cell-list path.
pub fn total_energy(config: &Configuration, potential: &PotentialSpec) -> Result<EnergyReport> {
    total_energy_with(config, potential, Method::CellList)
}

/// Plain double loop over all unordered pairs; the oracle the cell list is
/// checked against.
pub fn total_energy_naive(
    config: &Configuration,
    potential: &PotentialSpec,
) -> Result<EnergyReport> {
    total_energy_with(config, potential, Method::Naive)
}

pub fn total_energy_with(
    config: &Configuration,
    potential: &PotentialSpec,
    method: Method,
) -> Result<EnergyReport> {
    let n = match config.domain() {
        Domain::Interval { n } => n,
        Domain::Ring { .. } => {
            return Err(Error::Domain(
                "total_energy expects an interval domain; use ring_energy".into(),
            ))
        }
    };
    let xs = config.positions();
    check_sorted(xs)?;
    let (total, nonzero) = match method {
        Method::Naive => {
            let mut total = 0.0;
            let mut nonzero = 0u64;
            for i in 0..xs.len() {
                for j in (i + 1)..xs.len() {
                    let u = potential.evaluate(xs[i] - xs[j]);
                    total += u;
                    if u != 0.0 {
                        nonzero += 1;
                    }
                }
            }
            (total, nonzero)
        }
        Method::CellList => {
            let cells = bucket_interval(xs, n);
            let mut total = 0.0;
            let mut nonzero = 0u64;
            for c in 0..cells.len() {
                pair_sum_within(&cells[c], potential, &mut total, &mut nonzero);
                if c + 1 < cells.len() {
                    pair_sum_cross(&cells[c], &cells[c + 1], 0.0, potential, &mut total, &mut nonzero);
                }
            }
            (total, nonzero)
        }
    };
    Ok(EnergyReport {
        total,
        pair_count_nonzero: nonzero,
        method,
    })
}

/// Pair sum with minimal-image displacements on a ring. The ring length must
/// match the period of the potential.
pub fn ring_energy(
    config: &Configuration,
    periodized: &PeriodizedPotential,
) -> Result<EnergyReport> {
    ring_energy_with(config, periodized, Method::CellList)
}

pub fn ring_energy_naive(
    config: &Configuration,
    periodized: &PeriodizedPotential,
) -> Result<EnergyReport> {
    ring_energy_with(config, periodized, Method::Naive)
}

pub fn ring_energy_with(
    config: &Configuration,
    periodized: &PeriodizedPotential,
    method: Method,
) -> Result<EnergyReport> {
    let length = match config.domain() {
        Domain::Ring { length } => length,
        Domain::Interval { .. } => {
            return Err(Error::Domain(
                "ring_energy expects a ring domain; use total_energy".into(),
            ))
        }
    };
    if length as i64 != periodized.period() {
        return Err(Error::PeriodMismatch {
            config: length as i64,
            potential: periodized.period(),
        });
    }
    let xs = config.positions();
    check_sorted(xs)?;
    // With only two cells every pair is same-or-adjacent anyway.
    let (total, nonzero) = if method == Method::Naive || length == 2 {
        let mut total = 0.0;
        let mut nonzero = 0u64;
        for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                let u = periodized.evaluate(xs[i] - xs[j]);
                total += u;
                if u != 0.0 {
                    nonzero += 1;
                }
            }
        }
        (total, nonzero)
    } else {
        let l = length as f64;
        let cells = bucket_ring(xs, length);
        let mut total = 0.0;
        let mut nonzero = 0u64;
        for c in 0..cells.len() {
            pair_sum_within(&cells[c], periodized.base(), &mut total, &mut nonzero);
            let next = (c + 1) % cells.len();
            // Wrap pairs see their neighbors shifted by one period.
            let shift = if next == 0 { l } else { 0.0 };
            pair_sum_cross(
                &cells[c],
                &cells[next],
                shift,
                periodized.base(),
                &mut total,
                &mut nonzero,
            );
        }
        (total, nonzero)
    };
    let method = if length == 2 { Method::Naive } else { method };
    Ok(EnergyReport {
        total,
        pair_count_nonzero: nonzero,
        method,
    })
}

fn bucket_interval(xs: &[f64], n: u32) -> Vec<Vec<f64>> {
    let mut cells = vec![Vec::new(); n as usize + 1];
    for &x in xs {
        let c = (x.floor() as usize).min(n as usize);
        cells[c].push(x);
    }
    cells
}

fn bucket_ring(xs: &[f64], length: u32) -> Vec<Vec<f64>> {
    let mut cells = vec![Vec::new(); length as usize];
    for &x in xs {
        let c = (x.floor() as usize).min(length as usize - 1);
        cells[c].push(x);
    }
    cells
}

fn pair_sum_within(cell: &[f64], potential: &PotentialSpec, total: &mut f64, nonzero: &mut u64) {
    for i in 0..cell.len() {
        for j in (i + 1)..cell.len() {
            let u = potential.evaluate(cell[i] - cell[j]);
            *total += u;
            if u != 0.0 {
                *nonzero += 1;
            }
        }
    }
}

fn pair_sum_cross(
    cell: &[f64],
    next: &[f64],
    shift: f64,
    potential: &PotentialSpec,
    total: &mut f64,
    nonzero: &mut u64,
) {
    for &x in cell {
        for &y in next {
            let u = potential.evaluate(x - (y + shift));
            *total += u;
            if u != 0.0 {
                *nonzero += 1;
            }
        }
    }
}

/// Sum of u over all pairs with at least one member in [a, b]: exactly the
/// terms a number-preserving perturbation confined to the window can change.
/// Works on both domains; ring pairs use minimal-image displacements.
pub fn window_energy(
    config: &Configuration,
    potential: &PotentialSpec,
    a: f64,
    b: f64,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Contract(format!("window [{a}, {b}] needs a < b")));
    }
    let xs = config.positions();
    check_sorted(xs)?;
    let period = match config.domain() {
        Domain::Ring { length } => Some(length as f64),
        Domain::Interval { .. } => None,
    };
    let inside: Vec<bool> = xs.iter().map(|&x| x >= a && x <= b).collect();
    let mut total = 0.0;
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if inside[i] || inside[j] {
                let d = match period {
                    Some(l) => minimal_image(xs[i] - xs[j], l),
                    None => xs[i] - xs[j],
                };
                total += potential.evaluate(d);
            }
        }
    }
    Ok(total)
}

/// Tiles the profile `repeats` times around a ring and measures ring energy
/// divided by ring length.
pub fn energy_per_length(
    profile: &TowerProfile,
    potential: &PotentialSpec,
    repeats: u32,
) -> Result<f64> {
    if repeats < 2 {
        return Err(Error::Contract("repeats must be >= 2".into()));
    }
    let period = profile.heights.len() as u32;
    if period == 0 {
        return Err(Error::Contract("empty profile".into()));
    }
    let length = period * repeats;
    let mut positions = Vec::new();
    for rep in 0..repeats {
        for (site, &h) in profile.heights.iter().enumerate() {
            let x = (rep * period) as f64 + site as f64;
            for _ in 0..h {
                positions.push(x);
            }
        }
    }
    let config = Configuration::new(positions, Domain::ring(length)?)?;
    let periodized = potential.periodize(length as i64)?;
    let report = ring_energy(&config, &periodized)?;
    Ok(report.total / length as f64)
}
