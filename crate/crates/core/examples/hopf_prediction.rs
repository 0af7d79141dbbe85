// Hopf coefficient, period and predicted profile for a switching-equivalent
// in-regular network.

use rhythmnet::criticality::{analyze_critical, CriticalParam};
use rhythmnet::hopf::predict;
use rhythmnet::AdjacencySpec;

fn run() -> rhythmnet::Result<()> {
    let a = AdjacencySpec::from_rows(&[
        vec![0.4, -0.3, 0.3],
        vec![-0.5, 0.2, -0.3],
        vec![0.1, -0.6, 0.3],
    ])?;
    let analysis = analyze_critical(&a, CriticalParam::AlphaCritical, 0.5, 0.01)?;
    let report = predict(&a, &analysis)?;
    println!("alpha* = {:.6}, omega = {:.6}", analysis.point.value, report.omega);
    println!("b = {:.6} ({:?})", report.b, report.criticality);
    println!("period {:.3}, class {:?}", report.period, report.profile_class);
    for (j, (r, th)) in report
        .predicted_profile
        .amplitudes()
        .iter()
        .zip(report.predicted_profile.phases())
        .enumerate()
    {
        println!("  node {j}: rho = {r:.4}, theta = {th:.4}");
    }
    Ok(())
}

fn main() {
    run().expect("hopf_prediction");
}
