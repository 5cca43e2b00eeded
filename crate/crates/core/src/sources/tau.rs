use super::{primes::sieve_primes, Entry, EigenvalueSequence, Source};
use crate::error::{Error, Result};

/// Upper limit for [`tau_sequence`]; the recurrence is quadratic.
pub const MAX_TAU_LIMIT: u64 = 100_000;

/// Exact `tau(n)` for `0 <= n <= limit`, with `tau(0) = 0`.
///
/// Uses `Δ = q ∏ (1 - q^n)^24`: the coefficients `c_n` of the product satisfy
/// `n c_n = -24 Σ_{m=1}^{n} σ(m) c_{n-m}`, and `tau(n + 1) = c_n`.
///
/// Each product `σ(m) c_{n-m}` fits in `i128`, but partial sums can exceed it
/// for large `n`. The sum is accumulated modulo `2^128`; since the final value
/// `-n c_n / 24` does fit, wrapping arithmetic returns it exactly.
pub fn tau_coefficients(limit: usize) -> Vec<i128> {
    if limit == 0 {
        return vec![0];
    }
    let sigma = divisor_sums(limit);
    let mut c = vec![0i128; limit];
    c[0] = 1;
    for n in 1..limit {
        let mut acc = 0i128;
        for m in 1..=n {
            acc = acc.wrapping_add(sigma[m].wrapping_mul(c[n - m]));
        }
        let numer = acc.wrapping_mul(-24);
        debug_assert_eq!(numer % n as i128, 0);
        c[n] = numer / n as i128;
    }
    let mut tau = Vec::with_capacity(limit + 1);
    tau.push(0);
    tau.extend(c);
    tau
}

// σ(m) for m in 0..=limit.
fn divisor_sums(limit: usize) -> Vec<i128> {
    let mut sigma = vec![0i128; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            sigma[m] += d as i128;
        }
    }
    sigma
}

/// Normalized eigenvalues `a_p = tau(p) / p^{11/2}` for all `p <= limit`.
///
/// Fails with a data-integrity error if any value breaks Deligne's bound
/// `|tau(p)| <= 2 p^{11/2}`, which would indicate an arithmetic defect.
pub fn tau_sequence(limit: u64) -> Result<EigenvalueSequence> {
    if !(2..=MAX_TAU_LIMIT).contains(&limit) {
        return Err(Error::out_of_range("limit", limit, "2..=100000"));
    }
    let tau = tau_coefficients(limit as usize);
    let primes = sieve_primes(limit)?;
    let mut entries = Vec::with_capacity(primes.len());
    for &p in primes.primes() {
        let a = tau[p as usize] as f64 / (p as f64).powf(5.5);
        if a.is_nan() || a.abs() > 2.0 {
            return Err(Error::DataIntegrity(format!(
                "tau({p}) = {} violates |tau(p)| <= 2 p^(11/2)",
                tau[p as usize]
            )));
        }
        entries.push(Entry { p, a });
    }
    EigenvalueSequence::new(entries, Source::Tau, Vec::new())
}
