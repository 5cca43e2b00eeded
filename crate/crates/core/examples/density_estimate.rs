// Upper Dirichlet density of {p : a_p > c} for tau at the solved threshold.

use hecke_density::dirichlet::{theorem_check, upper_density_estimate, SGrid, ThresholdSet};
use hecke_density::optimizer::{solve_constants, MomentBounds};
use hecke_density::sources::tau_sequence;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sol = solve_constants(&MomentBounds::default(), 0.01)?;
    let seq = tau_sequence(30_000)?;
    let grid = SGrid::default_for(&seq)?;
    println!("grid {:?}, dropped by coupling {:?}", grid.points(), grid.dropped());

    let check = theorem_check(&seq, sol.threshold_c, 0.01, &grid)?;
    let all = upper_density_estimate(&seq, &ThresholdSet::All, &grid)?;
    println!(
        "density of a_p > {:.4}: {:.4} ({} primes); all primes: {:.4}",
        sol.threshold_c, check.estimate.value, check.estimate.subset_size, all.value
    );
    println!("density >= 1/100: {}", check.pass);

    let big = ThresholdSet::custom("|a_p| > 1.5", |_, a| a.abs() > 1.5);
    let est = upper_density_estimate(&seq, &big, &grid)?;
    println!("density of {big}: {:.4}", est.value);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
