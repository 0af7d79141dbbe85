// Equal-amplitude travelling-wave pattern from the two-node-core construction,
// and the same target through the general eigenbasis route.

use std::f64::consts::PI;

use num_complex::Complex64;
use rhythmnet::design::{design_general, design_phase_core, validate_design};
use rhythmnet::DesignTarget;

fn run() -> rhythmnet::Result<()> {
    let phases: Vec<f64> = (0..4).map(|k| k as f64 * PI / 2.0).collect();
    let target = DesignTarget::from_phases(&phases, Complex64::new(1.0, 1.0))?;
    let a = design_phase_core(&target)?;
    print!("{}", a.to_csv_string());
    let v = validate_design(&a, &target)?;
    println!("leading {:?}, distance {:.1e}, pass {}", v.leading.kind, v.profile_distance, v.pass);
    let g = design_general(&target)?;
    println!("general route differs by {:.1e}", (g.entries() - a.entries()).amax());
    Ok(())
}

fn main() {
    run().expect("phase_design");
}
