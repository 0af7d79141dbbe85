// Every Jacobian eigenvalue at the origin comes from an adjacency eigenvalue
// through a quadratic; compare against a dense solve of the full Jacobian.

use rhythmnet::jacobian::{associated_pair, build_jacobian, check_conjugation};
use rhythmnet::spectral::{eigendecompose, eigenvalues};
use rhythmnet::{AdjacencySpec, ModelParams};

fn run() -> rhythmnet::Result<()> {
    let a = AdjacencySpec::from_rows(&[vec![0.2, 1.0], vec![-1.0, 0.2]])?;
    let p = ModelParams::new(0.6, 0.4, 0.05)?;
    let spec = eigendecompose(&a)?;
    let mut mapped = Vec::new();
    for mu in spec.values() {
        let pair = associated_pair(mu, &p);
        println!("mu = {mu:.4} -> nu+ = {:.6}, nu- = {:.6}", pair.nu_plus, pair.nu_minus);
        mapped.push(pair.nu_plus);
        mapped.push(pair.nu_minus);
    }
    let direct = eigenvalues(&build_jacobian(&a, &p))?;
    let worst = direct
        .iter()
        .map(|d| mapped.iter().map(|m| (d - m).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    println!("max distance to a dense eigenvalue: {worst:.2e}");
    println!("conjugation checks pass: {}", check_conjugation(&spec, &p).all_pass);
    Ok(())
}

fn main() {
    run().expect("spectral_map");
}
