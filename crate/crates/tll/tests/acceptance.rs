//! End-to-end conformance suite. Each test exercises one headline claim of
//! the library and prints a single pass/fail line, so the whole contract can
//! be audited from the test output alone.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tll::bounds::{chain_lower_bound, energy_density_formula, ground_energy};
use tll::config::{
    build_tower_config, profile_of, sample_overlap_degenerate, Configuration, Domain,
    TowerProfile,
};
use tll::energy::{
    energy_per_length, ring_energy, ring_energy_naive, total_energy, total_energy_naive,
};
use tll::optimizer::{
    anneal, brute_force_min, local_stability_test, AnnealSchedule, Certificate,
};
use tll::potential::PotentialSpec;
use tll::spectral::{functional_kspace, functional_real, minimality_scan, Measure};
use tll::built_in_potentials;

fn report(number: u32, name: &str, ok: bool) {
    println!(
        "criterion {number} ({name}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {number} ({name}) failed");
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Closed-form energy: every tower configuration evaluates exactly to
/// (n+1)*C(m,2) + r*m under every built-in potential.
#[test]
fn criterion_1_closed_form_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let potentials = built_in_potentials();
    let mut ok = true;
    'outer: for n in 0u32..=8 {
        for m in 1u32..=4 {
            for r in 0..=n {
                let subsets: Vec<Vec<u32>> = if n <= 4 {
                    (0..=n).combinations(r as usize).collect()
                } else {
                    (0..20)
                        .map(|_| {
                            let mut sites: Vec<u32> = (0..=n).collect();
                            for i in (1..sites.len()).rev() {
                                let j = rng.gen_range(0..=i);
                                sites.swap(i, j);
                            }
                            let mut chosen: Vec<u32> =
                                sites.into_iter().take(r as usize).collect();
                            chosen.sort_unstable();
                            chosen
                        })
                        .collect()
                };
                let expected =
                    ((n as u64 + 1) * choose2(m as u64) + r as u64 * m as u64) as f64;
                for tall in &subsets {
                    let config = build_tower_config(n, m, tall).unwrap();
                    for potential in &potentials {
                        let energy = total_energy(&config, potential).unwrap().total;
                        if energy != expected {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    report(1, "closed-form energy", ok);
}

/// Bound dominance: random configurations never dip below the chain lower
/// bound.
#[test]
fn criterion_2_bound_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let potentials = built_in_potentials();
    let mut ok = true;
    'outer: for n in 0u32..=4 {
        for n_particles in (n as u64 + 1)..=12 {
            let bound = chain_lower_bound(n, n_particles).unwrap().lower_bound as f64;
            for _ in 0..10_000 {
                let positions: Vec<f64> = (0..n_particles)
                    .map(|_| rng.gen::<f64>() * n as f64)
                    .collect();
                let config = Configuration::new(positions, Domain::interval(n)).unwrap();
                for potential in &potentials {
                    let energy = total_energy(&config, potential).unwrap().total;
                    if energy < bound - 1e-12 {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    report(2, "bound dominance", ok);
}

/// Oracle optimality: exhaustive grid search reproduces the closed form, and
/// for the strictly-dominating power law every grid argmin is an integer
/// tower.
#[test]
fn criterion_3_oracle_optimality() {
    let potentials = built_in_potentials();
    let pl2 = PotentialSpec::power_law(2.0).unwrap();
    let mut ok = true;
    'outer: for n in 0u32..=2 {
        for n_particles in (n as u64 + 1)..=6 {
            let expected = ground_energy(n, n_particles).unwrap() as f64;
            for potential in &potentials {
                let out = brute_force_min(n, n_particles, potential, 0.25).unwrap();
                if out.result.best_energy != expected {
                    ok = false;
                    break 'outer;
                }
            }
            let out = brute_force_min(n, n_particles, &pl2, 0.25).unwrap();
            for argmin in &out.argmin_set {
                let profile = match profile_of(argmin, 1e-9) {
                    Some(p) => p,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                };
                if !profile.is_ground_state_profile()
                    || profile.particle_count() != n_particles
                {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    report(3, "oracle optimality", ok);
}

/// Certified stochastic search: annealing closes the gap to the lower bound
/// and lands on a two-height tower profile.
#[test]
fn criterion_4_certified_search() {
    let pl2 = PotentialSpec::power_law(2.0).unwrap();
    let mut ok = true;
    'outer: for &(n, n_particles) in &[(2u32, 7u64), (3, 8), (4, 9)] {
        let m = (n_particles / (n as u64 + 1)) as u32;
        for seed in 1..=3u64 {
            let schedule = AnnealSchedule::default_for(n_particles);
            let result = anneal(n, n_particles, &pl2, &schedule, seed).unwrap();
            if result.certificate != Some(Certificate::CertifiedOptimal) {
                ok = false;
                break 'outer;
            }
            let profile = match profile_of(&result.best_config, 1e-4) {
                Some(p) => p,
                None => {
                    ok = false;
                    break 'outer;
                }
            };
            if !profile
                .heights
                .iter()
                .all(|&h| h == m || h == m + 1)
            {
                ok = false;
                break 'outer;
            }
        }
    }
    report(4, "certified stochastic search", ok);
}

/// Overlap degeneracy: shifted sub-lattice families (with or without an
/// extra spread family) on a ring all reproduce the closed-form energy.
#[test]
fn criterion_5_overlap_degeneracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let overlap = PotentialSpec::overlap();
    let mut ok = true;
    for trial in 0..100u64 {
        let length = rng.gen_range(3u32..=8);
        let n = length - 1;
        let m = rng.gen_range(1u32..=3);
        let mut offsets: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
        offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let extra = rng.gen::<bool>();
        let config = sample_overlap_degenerate(n, m, &offsets, extra, 900 + trial).unwrap();
        let periodized = overlap.periodize(length as i64).unwrap();
        let measured = ring_energy(&config, &periodized).unwrap().total;
        let expected = ground_energy(n, config.len() as u64).unwrap() as f64;
        if (measured - expected).abs() > 1e-9 {
            ok = false;
            break;
        }
    }
    report(5, "overlap degeneracy", ok);
}

fn config_from_profile(profile: &TowerProfile) -> Configuration {
    let length = profile.heights.len() as u32;
    let positions: Vec<f64> = profile
        .heights
        .iter()
        .enumerate()
        .flat_map(|(site, &h)| std::iter::repeat(site as f64).take(h as usize))
        .collect();
    Configuration::new(positions, Domain::ring(length).unwrap()).unwrap()
}

/// Local stability: two-height profiles resist every windowed perturbation,
/// while profiles with height spread >= 2 are strictly unstable.
#[test]
fn criterion_6_local_stability() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let pl2 = PotentialSpec::power_law(2.0).unwrap();
    let mut ok = true;
    for trial in 0..20u64 {
        let length = rng.gen_range(2u32..=8);
        let m = rng.gen_range(1u32..=3);
        let heights: Vec<u32> = (0..length)
            .map(|_| if rng.gen::<bool>() { m + 1 } else { m })
            .collect();
        let config = config_from_profile(&TowerProfile::new(heights));
        let periodized = pl2.periodize(length as i64).unwrap();
        let window = (0.0, length as f64);
        let stability =
            local_stability_test(&config, &periodized, window, 500, 7000 + trial).unwrap();
        if !stability.is_stable() {
            ok = false;
            break;
        }
    }
    if ok {
        for trial in 0..10u64 {
            let length = rng.gen_range(2u32..=6);
            let m = rng.gen_range(1u32..=2);
            // Force at least one site with height m and one with m + 2.
            let mut heights: Vec<u32> = (0..length)
                .map(|_| if rng.gen::<bool>() { m + 2 } else { m })
                .collect();
            heights[0] = m;
            let tall_site = ((length / 2) as usize).max(1).min(length as usize - 1);
            heights[tall_site] = m + 2;
            let config = config_from_profile(&TowerProfile::new(heights));
            let periodized = pl2.periodize(length as i64).unwrap();
            let window = (0.0, length as f64);
            let stability =
                local_stability_test(&config, &periodized, window, 500, 8000 + trial)
                    .unwrap();
            if stability.min_delta >= -1e-9 {
                ok = false;
                break;
            }
        }
    }
    report(6, "local stability", ok);
}

/// Energy density: periodic tilings reproduce the closed-form energy per
/// unit length across a density sweep.
#[test]
fn criterion_7_energy_density() {
    let pl2 = PotentialSpec::power_law(2.0).unwrap();
    let mut ok = true;
    for step in 0..=8u32 {
        let rho = 1.0 + 0.25 * step as f64;
        let formula = energy_density_formula(rho).unwrap();
        let m = rho.floor() as u32;
        let talls = ((rho - m as f64) * 4.0).round() as u32;
        let heights: Vec<u32> = (0..4)
            .map(|i| if i < talls { m + 1 } else { m })
            .collect();
        let profile = TowerProfile::new(heights);
        let measured = energy_per_length(&profile, &pl2, 64).unwrap();
        if (measured - formula).abs() > 0.02 {
            ok = false;
            break;
        }
    }
    report(7, "energy density", ok);
}

/// Spectral functional: the uniform lattice measure attains the minimum 1/2
/// exactly, k-space truncation errors stay within the reported envelope, and
/// random measures never dip below the minimum.
#[test]
fn criterion_8_spectral() {
    let potentials = built_in_potentials();
    let mut ok = true;

    // Exact minimum at the uniform lattice measure for every member.
    'exact: for length in 2u32..=4 {
        let mu0 = Measure::lattice(length).unwrap();
        for potential in &potentials {
            if functional_real(&mu0, potential).unwrap() != 0.5 {
                ok = false;
                break 'exact;
            }
        }
    }

    // k-space vs real-space agreement within the reported truncation bound.
    if ok {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        'parseval: for trial in 0..100u32 {
            let length = 2 + trial % 3;
            let count = rng.gen_range(1..=3 * length as usize);
            let mut atoms: Vec<(f64, f64)> = (0..count)
                .map(|_| (rng.gen::<f64>() * length as f64, rng.gen::<f64>() + 0.05))
                .collect();
            let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
            for atom in atoms.iter_mut() {
                atom.1 *= length as f64 / total;
            }
            let mu = Measure::new(atoms, length).unwrap();
            for potential in &potentials {
                let real = functional_real(&mu, potential).unwrap();
                let kspace = functional_kspace(&mu, potential, 800).unwrap();
                if (kspace.value - real).abs() > kspace.truncation_estimate {
                    ok = false;
                    break 'parseval;
                }
            }
        }
    }

    // Minimality scan never finds a measure below 1/2.
    if ok {
        'scan: for length in 2u32..=4 {
            for (i, potential) in potentials.iter().enumerate() {
                let scan = minimality_scan(potential, length, 10_000, 42 + i as u64).unwrap();
                if scan.min_value < 0.5 - 1e-9 || scan.mu0_value != 0.5 {
                    ok = false;
                    break 'scan;
                }
            }
        }
    }

    // The overlap transform vanishes at nonzero multiples of 2*pi.
    if ok {
        let overlap = PotentialSpec::overlap();
        for l in 1..=5u32 {
            let k = 2.0 * std::f64::consts::PI * l as f64;
            if overlap.fourier_transform(k).abs() > 1e-9 {
                ok = false;
                break;
            }
        }
    }
    report(8, "spectral minimality", ok);
}

/// Cross-method consistency: naive and cell-list energies agree to 1e-12
/// relative, and interval towers keep their exact energy on the matching
/// ring.
#[test]
fn criterion_9_cross_method() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let potentials = built_in_potentials();
    let mut ok = true;
    'outer: for _ in 0..1000 {
        let n = rng.gen_range(1u32..=6);
        let count = rng.gen_range(2usize..=20);
        let positions: Vec<f64> = (0..count).map(|_| rng.gen::<f64>() * n as f64).collect();
        let config = Configuration::new(positions, Domain::interval(n)).unwrap();
        for potential in &potentials {
            let fast = total_energy(&config, potential).unwrap().total;
            let slow = total_energy_naive(&config, potential).unwrap().total;
            let scale = slow.abs().max(1.0);
            if (fast - slow).abs() > 1e-12 * scale {
                ok = false;
                break 'outer;
            }
        }
    }
    if ok {
        let mut rng = ChaCha8Rng::seed_from_u64(910);
        'towers: for _ in 0..50 {
            let n = rng.gen_range(1u32..=6);
            let m = rng.gen_range(1u32..=4);
            let r = rng.gen_range(0..=n);
            let tall: Vec<u32> = (0..r).collect();
            let interval_config = build_tower_config(n, m, &tall).unwrap();
            for potential in &potentials {
                let flat = total_energy(&interval_config, potential).unwrap().total;
                let ring_config = interval_config.on_ring().unwrap();
                let periodized = potential.periodize(n as i64 + 1).unwrap();
                let wrapped = ring_energy_naive(&ring_config, &periodized).unwrap().total;
                if flat != wrapped {
                    ok = false;
                    break 'towers;
                }
            }
        }
    }
    report(9, "cross-method consistency", ok);
}
