// Solve for the threshold constant at density 1/100 and confirm the case
// split on d.

use hecke_density::optimizer::{dichotomy_check, solve_constants, uniform_grid, MomentBounds};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = MomentBounds::default();
    let sol = solve_constants(&m, 0.01)?;
    println!("d     = {:.10}", sol.d);
    println!("beta  = {:.10}", sol.beta);
    println!("alpha = {:.10}", sol.alpha);
    println!("c     = {:.10}  (c^4 = {:.10})", sol.threshold_c, sol.threshold_fourth_power());
    println!("max equation residual {:e}", sol.residual);

    let report = dichotomy_check(&sol, &m, &uniform_grid(0.01, 1.99, 10_000))?;
    println!(
        "case split: {} points, {} violations, f1 crosses at {:.10}",
        report.points_checked,
        report.violations.len(),
        report.f1_crossing
    );
    if !report.pass() {
        return Err("case split failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
