//! Synthetic eigenvalue sequences.
//!
//! Samples are attached to the first `n` primes so the Dirichlet-series code
//! treats synthetic and real data identically. Both samplers use ChaCha8
//! seeded from a `u64`, so a seed fixes the sequence on every platform.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{primes::first_primes, Entry, EigenvalueSequence, Source};
use crate::error::{Error, Result};

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::out_of_range("count", n, "n >= 1"));
    }
    Ok(())
}

/// `n` draws of `2 cos θ` with `θ ~ (2/π) sin²θ dθ` on `[0, π]`, i.e. the
/// semicircle law on `[-2, 2]`.
///
/// Rejection from uniform `θ`, accepting with probability `sin²θ`.
pub fn sample_sato_tate(n: usize, seed: u64) -> Result<EigenvalueSequence> {
    check_count(n)?;
    let primes = first_primes(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = primes
        .into_iter()
        .map(|p| {
            let theta = loop {
                let theta = PI * rng.random::<f64>();
                let s = theta.sin();
                if rng.random::<f64>() < s * s {
                    break theta;
                }
            };
            Entry {
                p,
                a: 2.0 * theta.cos(),
            }
        })
        .collect();
    EigenvalueSequence::new(entries, Source::SatoTate, Vec::new())
}

/// `n` draws from the eigenvalue law of a dihedral form: `0` with probability
/// 1/2 (inert primes), otherwise `2 cos θ` with `θ` uniform on `[0, π]`.
pub fn sample_dihedral(n: usize, seed: u64) -> Result<EigenvalueSequence> {
    check_count(n)?;
    let primes = first_primes(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = primes
        .into_iter()
        .map(|p| {
            let a = if rng.random::<bool>() {
                0.0
            } else {
                2.0 * (PI * rng.random::<f64>()).cos()
            };
            Entry { p, a }
        })
        .collect();
    EigenvalueSequence::new(entries, Source::Dihedral, Vec::new())
}
