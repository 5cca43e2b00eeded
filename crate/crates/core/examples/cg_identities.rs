// Tensor powers of the Satake matrix against their Clebsch–Gordan pieces.

use hecke_density::satake::{
    cg_decomposition, trace_moment_residual, verify_cg_identity, SatakeParams,
};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Normalised tau(2).
    let a = -24.0 / 2f64.powf(5.5);
    let sp = SatakeParams::from_eigenvalue(a, Complex64::new(1.0, 0.0))?;
    println!("a_2 = {a:.9}, alpha = {:.9}, beta = {:.9}", sp.alpha(), sp.beta());

    for k in [3, 4, 6, 8] {
        let dec = cg_decomposition(k)?;
        let pieces: Vec<String> = dec.parts.iter().map(|(p, m)| format!("{m}·{p}")).collect();
        let disc = verify_cg_identity(&sp, k)?;
        let resid = trace_moment_residual(&sp, k)?;
        println!(
            "k={k}: dim {} = {}; discrepancy {disc:.2e}, trace residual {resid:.2e}",
            dec.total_dim(),
            pieces.join(" + ")
        );
        if disc > 1e-12 {
            return Err(format!("identity fails at k = {k}").into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
