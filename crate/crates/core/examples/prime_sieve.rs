// Primes up to a limit, and the first n primes.

use hecke_density::sources::{first_primes, sieve_primes};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let table = sieve_primes(1_000_000)?;
    println!("pi(10^6) = {}", table.len());
    println!("last five: {:?}", &table.primes()[table.len() - 5..]);
    let first = first_primes(10_000)?;
    println!("p_10000 = {}", first[first.len() - 1]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
