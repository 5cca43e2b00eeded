//! Compensated summation with a fixed reduction order.
//!
//! Partial Dirichlet series over millions of primes add terms that span many
//! orders of magnitude. Every sum in the crate goes through [`Neumaier`] so the
//! rounding error stays independent of the number of terms, and the parallel
//! path reduces fixed-size chunks in ascending order so its result does not
//! depend on the thread count.

use rayon::prelude::*;

/// Inputs shorter than this are summed on the calling thread.
pub const PARALLEL_THRESHOLD: usize = 1 << 16;

/// Chunk length for the parallel reduction. Fixed so that chunk boundaries,
/// and therefore results, never depend on the pool size.
pub const CHUNK_LEN: usize = 1 << 14;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one, keeping both compensations.
    #[inline]
    pub fn merge(&mut self, other: Neumaier) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sequential compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<Neumaier>().value()
}

/// Compensated sum of `term(item)` over `items`, in slice order.
///
/// See [`indexed_sum`] for the reduction order.
pub fn ordered_sum<T, F>(items: &[T], term: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    indexed_sum(items.len(), |i| term(&items[i]))
}

/// Compensated sum of `term(i)` for `i` in `0..len`, in index order.
///
/// Large inputs are split into [`CHUNK_LEN`] chunks evaluated in parallel;
/// the chunk partials are then merged left to right. The result is
/// bit-identical for any number of worker threads.
pub fn indexed_sum<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    if len < PARALLEL_THRESHOLD {
        return (0..len).map(&term).collect::<Neumaier>().value();
    }
    let chunks = len.div_ceil(CHUNK_LEN);
    let partials: Vec<Neumaier> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK_LEN).min(len);
            (c * CHUNK_LEN..end).map(&term).collect::<Neumaier>()
        })
        .collect();
    let mut total = Neumaier::new();
    for partial in partials {
        total.merge(partial);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_summation() {
        let values = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = values.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn parallel_matches_sequential() {
        let items: Vec<u64> = (1..=300_000).collect();
        let term = |n: &u64| 1.0 / (*n as f64).powf(1.1);
        let par = ordered_sum(&items, term);
        let seq = compensated_sum(items.iter().map(term));
        assert!(((par - seq) / seq).abs() < 1e-12, "{par} vs {seq}");
    }

    #[test]
    fn parallel_is_independent_of_pool_size() {
        let items: Vec<f64> = (0..200_000).map(|i| ((i as f64) * 0.37).sin()).collect();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| ordered_sum(&items, |x| *x));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| ordered_sum(&items, |x| *x));
        assert_eq!(one.to_bits(), four.to_bits());
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(ordered_sum::<f64, _>(&[], |x| *x), 0.0);
    }
}
