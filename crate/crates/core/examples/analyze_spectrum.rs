// Eigendecomposition of a small signed network and the leading-eigenvalue verdict.

use rhythmnet::spectral::{classify_leading, eigendecompose};
use rhythmnet::AdjacencySpec;

fn run() -> rhythmnet::Result<()> {
    let a = AdjacencySpec::from_rows(&[
        vec![0.0, 1.0, 0.5],
        vec![-0.4, 0.0, 1.0],
        vec![1.0, 0.3, 0.0],
    ])?;
    let spec = eigendecompose(&a)?;
    for (k, t) in spec.triples.iter().enumerate() {
        println!("mu_{} = {:.6}  simple={}", k + 1, t.value, t.is_simple);
    }
    let info = classify_leading(&spec, &a.tol);
    println!("leading: {:?}, gap {:.4}", info.kind, info.re_gap);
    for (j, w) in info.w1.iter().enumerate() {
        println!("  w1[{j}] = {w:.4}");
    }
    Ok(())
}

fn main() {
    run().expect("analyze_spectrum");
}
