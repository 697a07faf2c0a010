//! Ground-state energy per unit length across a density sweep.
//!
//! At density rho >= 1 the energy per length is (1/2) * floor(rho) *
//! (rho + {rho} - 1). Tiling a two-height profile around a long ring
//! reproduces the formula exactly whenever the fractional part is
//! commensurate with the profile period.

use tll::bounds::energy_density_formula;
use tll::config::TowerProfile;
use tll::energy::energy_per_length;
use tll::potential::PotentialSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let potential = PotentialSpec::overlap();
    println!("{:>6} {:>16} {:>16} {:>12}", "rho", "formula", "measured", "gap");
    for step in 0..=8u32 {
        let rho = 1.0 + 0.25 * step as f64;
        let m = rho.floor() as u32;
        let talls = ((rho - m as f64) * 4.0).round() as u32;
        let heights: Vec<u32> = (0..4).map(|i| if i < talls { m + 1 } else { m }).collect();
        let profile = TowerProfile::new(heights);

        let formula = energy_density_formula(rho)?;
        let measured = energy_per_length(&profile, &potential, 64)?;
        println!(
            "{rho:>6.2} {formula:>16.12} {measured:>16.12} {:>12.3e}",
            measured - formula
        );
        assert!((measured - formula).abs() <= 1e-9);
    }
    Ok(())
}
