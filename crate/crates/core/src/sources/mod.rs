//! Hecke-eigenvalue sequences and where they come from.

mod csv_io;
mod primes;
mod sampling;
mod tau;

pub use csv_io::{load_csv, parse_csv, write_csv};
pub use primes::{first_primes, is_prime, sieve_primes, PrimeTable, MAX_SIEVE_LIMIT};
pub use sampling::{sample_dihedral, sample_sato_tate};
pub use tau::{tau_coefficients, tau_sequence, MAX_TAU_LIMIT};

use std::fmt;

use crate::error::{Error, Result};

/// One normalized eigenvalue `a_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub p: u64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Tau,
    SatoTate,
    Dihedral,
    Csv,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Tau => "tau",
            Source::SatoTate => "sato_tate",
            Source::Dihedral => "dihedral",
            Source::Csv => "csv",
        }
    }

    /// Sources whose eigenvalues are known to satisfy `|a| <= 2`.
    fn is_tempered(&self) -> bool {
        matches!(self, Source::Tau | Source::SatoTate)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Normalization of the stored eigenvalues. Only the unitary normalization
/// (Ramanujan bound `|a_p| <= 2`) is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Unitary,
}

/// Ordered `(p, a_p)` pairs together with the excluded (ramified) primes.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueSequence {
    entries: Vec<Entry>,
    normalization: Normalization,
    source: Source,
    excluded: Vec<u64>,
}

impl EigenvalueSequence {
    /// Validates ordering, finiteness, disjointness from `excluded`, and the
    /// Ramanujan bound for tempered sources. Primality of the indices is the
    /// caller's responsibility (see [`load_csv`] for checked input).
    pub fn new(entries: Vec<Entry>, source: Source, mut excluded: Vec<u64>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[1].p <= w[0].p {
                return Err(Error::InvalidSequence(format!(
                    "primes must be strictly increasing ({} then {})",
                    w[0].p, w[1].p
                )));
            }
        }
        if let Some(e) = entries.iter().find(|e| !e.a.is_finite()) {
            return Err(Error::InvalidSequence(format!("a_{} is not finite", e.p)));
        }
        if source.is_tempered() {
            if let Some(e) = entries.iter().find(|e| e.a.abs() > 2.0) {
                return Err(Error::InvalidSequence(format!(
                    "|a_{}| = {} exceeds 2 for a tempered source",
                    e.p,
                    e.a.abs()
                )));
            }
        }
        excluded.sort_unstable();
        excluded.dedup();
        if let Some(p) = excluded
            .iter()
            .find(|p| entries.binary_search_by_key(p, |e| &e.p).is_ok())
        {
            return Err(Error::InvalidSequence(format!(
                "prime {p} is both listed and excluded"
            )));
        }
        Ok(Self {
            entries,
            normalization: Normalization::Unitary,
            source,
            excluded,
        })
    }

    /// Eigenvalues attached to consecutive primes, with nothing excluded.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, f64)>, source: Source) -> Result<Self> {
        let entries = pairs.into_iter().map(|(p, a)| Entry { p, a }).collect();
        Self::new(entries, source, Vec::new())
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn excluded(&self) -> &[u64] {
        &self.excluded
    }

    /// Largest prime carrying an eigenvalue, or 0 for an empty sequence.
    pub fn truncation(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.p)
    }

    pub fn get(&self, p: u64) -> Option<f64> {
        self.entries
            .binary_search_by_key(&p, |e| e.p)
            .ok()
            .map(|i| self.entries[i].a)
    }
}

/// An entry exceeding `2 p^{7/64}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundViolation {
    pub p: u64,
    pub a: f64,
    pub bound: f64,
}

/// Kim–Sarnak bound `2 p^{7/64}`.
pub fn kim_sarnak_bound(p: u64) -> f64 {
    2.0 * (p as f64).powf(7.0 / 64.0)
}

/// All entries with `|a_p| > 2 p^{7/64}`; an empty list means the sequence
/// is consistent with the bound.
pub fn validate_kim_sarnak(seq: &EigenvalueSequence) -> Vec<BoundViolation> {
    seq.entries
        .iter()
        .filter_map(|e| {
            let bound = kim_sarnak_bound(e.p);
            (e.a.abs() > bound).then_some(BoundViolation { p: e.p, a: e.a, bound })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_duplicate_primes() {
        assert!(EigenvalueSequence::from_pairs([(3, 0.1), (2, 0.2)], Source::Csv).is_err());
        assert!(EigenvalueSequence::from_pairs([(2, 0.1), (2, 0.2)], Source::Csv).is_err());
    }

    #[test]
    fn rejects_overlap_with_excluded() {
        let entries = vec![Entry { p: 2, a: 0.1 }, Entry { p: 3, a: 0.1 }];
        assert!(EigenvalueSequence::new(entries.clone(), Source::Csv, vec![3]).is_err());
        let seq = EigenvalueSequence::new(entries, Source::Csv, vec![11, 5, 11]).unwrap();
        assert_eq!(seq.excluded(), &[5, 11]);
    }

    #[test]
    fn tempered_sources_reject_large_values() {
        assert!(EigenvalueSequence::from_pairs([(2, 2.1)], Source::SatoTate).is_err());
        assert!(EigenvalueSequence::from_pairs([(2, 2.1)], Source::Csv).is_ok());
        assert!(EigenvalueSequence::from_pairs([(2, f64::NAN)], Source::Csv).is_err());
    }

    #[test]
    fn kim_sarnak_fixtures() {
        // 2 * 2^{7/64} = 2.157521...
        assert!((kim_sarnak_bound(2) - 2.157_521_6).abs() < 1e-7);
        let bad = EigenvalueSequence::from_pairs([(2, 2.2)], Source::Csv).unwrap();
        let v = validate_kim_sarnak(&bad);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].p, 2);
        let ok = EigenvalueSequence::from_pairs([(2, 2.1)], Source::Csv).unwrap();
        assert!(validate_kim_sarnak(&ok).is_empty());
        let negative = EigenvalueSequence::from_pairs([(2, -2.2)], Source::Csv).unwrap();
        assert_eq!(validate_kim_sarnak(&negative).len(), 1);
    }

    #[test]
    fn lookup_and_truncation() {
        let seq = EigenvalueSequence::from_pairs([(2, 0.5), (3, -0.25)], Source::Csv).unwrap();
        assert_eq!(seq.get(3), Some(-0.25));
        assert_eq!(seq.get(5), None);
        assert_eq!(seq.truncation(), 3);
    }
}
