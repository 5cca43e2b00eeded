// How the threshold constant moves as the target density shrinks.

use hecke_density::optimizer::{tradeoff_sweep, MomentBounds};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let deltas = [0.1, 0.05, 0.02, 0.01, 0.005, 0.001, 0.0001];
    let rows = tradeoff_sweep(&MomentBounds::default(), &deltas);
    println!("{:>8}  {:>10}  {:>10}", "delta", "c", "d");
    let mut last = f64::NEG_INFINITY;
    for row in &rows {
        match &row.outcome {
            Ok(sol) => {
                println!("{:>8}  {:>10.6}  {:>10.6}", row.delta, sol.threshold_c, sol.d);
                // Asking for a sparser set allows a larger threshold.
                if sol.threshold_c < last {
                    return Err("threshold is not monotone in delta".into());
                }
                last = sol.threshold_c;
            }
            Err(reason) => println!("{:>8}  infeasible: {reason}", row.delta),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
