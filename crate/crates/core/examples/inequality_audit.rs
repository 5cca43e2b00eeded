// The Hölder and Cauchy–Schwarz steps of the density argument, evaluated
// as finite sums on tau data.

use hecke_density::dirichlet::SGrid;
use hecke_density::optimizer::inequality_audit;
use hecke_density::sources::tau_sequence;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seq = tau_sequence(30_000)?;
    let grid = SGrid::geometric(4, seq.truncation(), 0.0)?;
    let audit = inequality_audit(&seq, &grid)?;
    for e in &audit.entries {
        println!("s={:.4} {:<32} lhs {:>12.6} rhs {:>12.6} margin {:>10.3e}", e.s, e.name, e.lhs, e.rhs, e.margin);
    }
    println!("all pass: {}, smallest margin {:e}", audit.pass(), audit.min_margin());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
