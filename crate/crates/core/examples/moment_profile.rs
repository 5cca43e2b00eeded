// Self-normalised moments of synthetic eigenvalues along the s-grid.

use hecke_density::dirichlet::{moment_profile, SGrid};
use hecke_density::sources::{sample_dihedral, sample_sato_tate};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (name, seq) in [
        ("sato_tate", sample_sato_tate(200_000, 1)?),
        ("dihedral", sample_dihedral(200_000, 1)?),
    ] {
        let grid = SGrid::new(vec![1.6, 1.4, 1.25], seq.truncation(), 3.0)?;
        let profile = moment_profile(&seq, &grid)?;
        println!("{name}: s = {:?}", profile.s_points);
        for row in &profile.rows {
            let plain = seq.entries().iter().map(|e| e.a.powi(row.k as i32)).sum::<f64>() / seq.len() as f64;
            println!(
                "  k={} target {:>4} ({}): weighted {:?}, unweighted {plain:.4}",
                row.k,
                row.target,
                row.kind.as_str(),
                row.normalized.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
