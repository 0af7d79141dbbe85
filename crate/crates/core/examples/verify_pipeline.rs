// Full loop: design, critical point, prediction, simulation and measurement.

use std::f64::consts::PI;

use num_complex::Complex64;
use rhythmnet::pipeline::verify;
use rhythmnet::{DesignTarget, VerifyConfig};

fn run() -> rhythmnet::Result<()> {
    let targets = [
        DesignTarget::from_signed_amplitudes(&[1.0, 0.5, -0.25], 1.0)?,
        DesignTarget::from_phases(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0], Complex64::new(1.0, 1.0))?,
    ];
    for t in &targets {
        let (_, r) = verify(t, &VerifyConfig::new(0.01, 0.02))?;
        println!(
            "{:?}: hausdorff {:.4} (tol {:.2}), period error {:.3}, class {:?}, pass {}",
            r.mode,
            r.hausdorff.unwrap_or(f64::NAN),
            r.tolerance,
            r.period_rel_error.unwrap_or(f64::NAN),
            r.measured_class,
            r.pass
        );
    }
    Ok(())
}

fn main() {
    run().expect("verify_pipeline");
}
