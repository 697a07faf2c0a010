//! Family-membership validation for user-supplied potentials.
//!
//! A valid member is even, equals 1 at the origin, dominates the chord
//! 1 - |x| on (0, 1) and vanishes beyond unit range. Every closed-form
//! guarantee of this library is conditional on these invariants, so
//! tabulated potentials should be validated before use.

use tll::potential::{validate_family, PotentialSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for potential in tll::built_in_potentials() {
        let report = validate_family(&potential, 0.01)?;
        println!(
            "built-in member: valid = {}, strict above chord = {}",
            report.is_valid(),
            potential.strict_above_chord()
        );
        assert!(report.is_valid());
    }

    // A tabulated curve that dips below the chord at |x| = 0.5.
    let bad = PotentialSpec::tabulated(vec![
        (-1.0, 0.0),
        (-0.5, 0.3),
        (0.0, 1.0),
        (0.5, 0.3),
        (1.0, 0.0),
    ])?;
    let report = validate_family(&bad, 0.01)?;
    println!("defective tabulated curve: valid = {}", report.is_valid());
    for violation in &report.violations {
        println!("  {violation:?}");
    }
    assert!(!report.is_valid());
    Ok(())
}
