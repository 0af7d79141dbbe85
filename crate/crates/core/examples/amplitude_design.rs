// Star network whose rhythm has prescribed in-phase and anti-phase amplitudes.

use rhythmnet::design::{design_amplitude_star, validate_design};
use rhythmnet::DesignTarget;

fn run() -> rhythmnet::Result<()> {
    let target = DesignTarget::from_signed_amplitudes(&[1.0, 0.5, -0.25, 0.8], 1.0)?;
    let a = design_amplitude_star(&target)?;
    print!("{}", a.to_csv_string());
    let v = validate_design(&a, &target)?;
    println!("leading {:?}, profile distance {:.1e}, pass {}", v.leading.kind, v.profile_distance, v.pass);
    Ok(())
}

fn main() {
    run().expect("amplitude_design");
}
