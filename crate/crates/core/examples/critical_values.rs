// Critical coupling parameters for real and complex leading eigenvalues.

use num_complex::Complex64;
use rhythmnet::criticality::{alpha_critical, beta_critical, leading_real_part};

fn run() -> rhythmnet::Result<()> {
    let eps = 0.01;
    let real = alpha_critical(Complex64::new(1.0, 0.0), 0.5, eps)?;
    println!("mu1 = 1, beta = 0.5: alpha* = {:.6}, period {:.3}", real.value, real.period());

    let mu1 = Complex64::new(1.0, 1.0);
    let cplx = beta_critical(mu1, 0.5, eps)?;
    println!("mu1 = 1+i, alpha = 0.5: beta* = {:.6}, period {:.3}", cplx.value, cplx.period());
    println!(
        "Re(nu+) at beta*: {:.2e}, transversality {:.4}",
        leading_real_part(mu1, 0.5, cplx.value, eps),
        cplx.transversality
    );
    Ok(())
}

fn main() {
    run().expect("critical_values");
}
