//! Exhaustive grid enumeration as an independent oracle.
//!
//! On a grid that contains the integer sites, the global grid minimum of a
//! family potential equals the continuum ground energy, and for potentials
//! strictly above the chord the argmin set is exactly the integer towers.

use tll::config::profile_of;
use tll::optimizer::brute_force_min;
use tll::potential::PotentialSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let potential = PotentialSpec::power_law(2.0)?;
    let (n, n_particles, grid_step) = (2, 5, 0.25);
    let out = brute_force_min(n, n_particles, &potential, grid_step)?;
    println!(
        "grid minimum for n = {n}, N = {n_particles}, step {grid_step}: {}",
        out.result.best_energy
    );
    println!("{} grid argmin(s):", out.argmin_set.len());
    for argmin in &out.argmin_set {
        let profile = profile_of(argmin, 1e-9).expect("strict potential: towers only");
        println!("  positions {:?} -> heights {:?}", argmin.positions(), profile.heights);
        assert!(profile.is_ground_state_profile());
    }
    Ok(())
}
