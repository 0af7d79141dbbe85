// Measured period and relative profile versus the Hopf prediction.

use rhythmnet::criticality::{analyze_critical, CriticalParam};
use rhythmnet::extract::{classify_measured, hausdorff, measure};
use rhythmnet::hopf::predict;
use rhythmnet::simulate::simulate;
use rhythmnet::{AdjacencySpec, ExtractionConfig, SimConfig};

fn run() -> rhythmnet::Result<()> {
    let a = AdjacencySpec::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.0],
        vec![-0.25, 0.0, 0.0],
    ])?;
    let analysis = analyze_critical(&a, CriticalParam::AlphaCritical, 0.5, 0.01)?;
    let report = predict(&a, &analysis)?;
    let ts = simulate(&a, &analysis.point.past(0.02), &SimConfig::for_period(report.period, 80.0))?;
    let cfg = ExtractionConfig::default();
    let m = measure(&ts, &cfg)?;
    println!("period: predicted {:.3}, measured {:.3}", report.period, m.period);
    println!("measured amplitudes {:?}", m.profile.amplitudes());
    println!("measured phases {:?}", m.profile.phases());
    println!("class {:?}", classify_measured(&m, &cfg));
    println!("Hausdorff distance {:.4}", hausdorff(&report.predicted_profile, &m.profile)?);
    Ok(())
}

fn main() {
    run().expect("extract_profile");
}
