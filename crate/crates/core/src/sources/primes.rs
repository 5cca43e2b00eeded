use crate::error::{Error, Result};

/// Memory guard for [`sieve_primes`].
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// All primes up to and including `limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn into_primes(self) -> Vec<u64> {
        self.primes
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::out_of_range("limit", limit, "2..=100000000"));
    }
    // composite[i] marks 2i + 1.
    let half = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_count(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    Ok(PrimeTable { limit, primes })
}

fn estimate_count(limit: u64) -> usize {
    let x = limit as f64;
    (1.3 * x / x.ln().max(1.0)) as usize + 8
}

/// The first `n` primes.
pub fn first_primes(n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    // p_n < n (ln n + ln ln n) for n >= 6.
    let bound = if n < 6 {
        13
    } else {
        let x = n as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
    };
    let mut primes = sieve_primes(bound)?.into_primes();
    primes.truncate(n);
    Ok(primes)
}

/// Deterministic trial division; used to validate external input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
