// RK4 simulation just past criticality and a small parallel sweep in alpha.

use rhythmnet::criticality::alpha_critical;
use rhythmnet::simulate::{simulate, steady_amplitudes, sweep, SweepParam};
use rhythmnet::{AdjacencySpec, ModelParams, SimConfig};

fn run() -> rhythmnet::Result<()> {
    let a = AdjacencySpec::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])?;
    let crit = alpha_critical(num_complex::Complex64::new(1.0, 0.0), 0.5, 0.01)?;
    let cfg = SimConfig::for_period(crit.period(), 40.0);
    let ts = simulate(&a, &crit.past(0.02), &cfg)?;
    println!("{} samples, steady amplitudes {:?}", ts.len(), steady_amplitudes(&ts, 0.5));

    let base = ModelParams::new(crit.value, 0.5, 0.01)?;
    let values = [crit.value - 0.01, crit.value + 0.01, crit.value + 0.04];
    for pt in sweep(&a, &base, SweepParam::Alpha, &values, &cfg)? {
        println!("alpha = {:.4}: amplitude {:.4}", pt.value, pt.steady_amplitude[0]);
    }
    Ok(())
}

fn main() {
    run().expect("simulate_network");
}
