// Ramanujan tau at primes, normalised so that |a_p| <= 2.

use hecke_density::sources::{tau_coefficients, tau_sequence, validate_kim_sarnak};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tau = tau_coefficients(30);
    for (n, t) in tau.iter().enumerate().take(13).skip(1) {
        println!("tau({n:>2}) = {t}");
    }
    assert_eq!(tau[6], tau[2] * tau[3]);

    let seq = tau_sequence(10_000)?;
    let (min, max) = seq
        .entries()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e.a), hi.max(e.a)));
    println!("{} primes up to {}: a_p in [{min:.6}, {max:.6}]", seq.len(), seq.truncation());
    println!("Kim–Sarnak violations: {}", validate_kim_sarnak(&seq).len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
