//! The `p,a_p` eigenvalue file format.
//!
//! ```text
//! # any comment
//! # excluded: 11 37
//! p,a_p
//! 2,-0.530330
//! 3,0.598734
//! ```
//!
//! Comment lines may only appear before the header. LF and CRLF line endings
//! are both accepted; blank lines are ignored.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use super::{primes::is_prime, Entry, EigenvalueSequence, Source};
use crate::error::{Error, Result};

pub const HEADER: &str = "p,a_p";
const EXCLUDED_TAG: &str = "excluded:";

pub fn load_csv(path: impl AsRef<Path>) -> Result<EigenvalueSequence> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, path)
}

/// Parses file contents; `origin` is only used in error messages.
pub fn parse_csv(text: &str, origin: &Path) -> Result<EigenvalueSequence> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut excluded = Vec::new();
    let mut entries: Vec<Entry> = Vec::new();
    let mut seen_header = false;
    let mut seen = HashSet::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if seen_header {
                return Err(err(line_no, "comment lines must precede the header".into()));
            }
            if let Some(list) = comment.trim().strip_prefix(EXCLUDED_TAG) {
                for tok in list.split_whitespace() {
                    let p: u64 = tok
                        .parse()
                        .map_err(|_| err(line_no, format!("bad excluded prime {tok:?}")))?;
                    if !is_prime(p) {
                        return Err(err(line_no, format!("excluded index {p} is not prime")));
                    }
                    excluded.push(p);
                }
            }
            continue;
        }
        if !seen_header {
            if line != HEADER {
                return Err(err(line_no, format!("expected header {HEADER:?}, found {line:?}")));
            }
            seen_header = true;
            continue;
        }

        let (p_txt, a_txt) = line
            .split_once(',')
            .ok_or_else(|| err(line_no, format!("expected two fields, found {line:?}")))?;
        if a_txt.contains(',') {
            return Err(err(line_no, format!("expected two fields, found {line:?}")));
        }
        let p: u64 = p_txt
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("bad prime index {p_txt:?}")))?;
        let a: f64 = a_txt
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("bad eigenvalue {a_txt:?}")))?;
        if !is_prime(p) {
            return Err(err(line_no, format!("index {p} is not prime")));
        }
        if !a.is_finite() {
            return Err(err(line_no, format!("eigenvalue {a_txt:?} is not finite")));
        }
        if !seen.insert(p) {
            return Err(err(line_no, format!("duplicate prime {p}")));
        }
        entries.push(Entry { p, a });
    }

    if !seen_header {
        return Err(err(1, format!("missing header {HEADER:?}")));
    }
    if entries.is_empty() {
        return Err(Error::EmptySequence {
            path: origin.to_path_buf(),
        });
    }
    entries.sort_by_key(|e| e.p);
    EigenvalueSequence::new(entries, Source::Csv, excluded)
}

/// Writes a sequence in the format read by [`load_csv`]. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(seq: &EigenvalueSequence, mut out: W) -> std::io::Result<()> {
    if !seq.excluded().is_empty() {
        let list: Vec<String> = seq.excluded().iter().map(u64::to_string).collect();
        writeln!(out, "# {EXCLUDED_TAG} {}", list.join(" "))?;
    }
    writeln!(out, "{HEADER}")?;
    for e in seq.entries() {
        writeln!(out, "{},{}", e.p, e.a)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<EigenvalueSequence> {
        parse_csv(text, Path::new("test.csv"))
    }

    #[test]
    fn two_entries() {
        let seq = parse("p,a_p\n2,-0.530330\n3,0.598734\n").unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.get(2), Some(-0.530330));
        assert_eq!(seq.source(), Source::Csv);
    }

    #[test]
    fn crlf_comments_and_excluded() {
        let seq = parse("# level 11\r\n# excluded: 11\r\np,a_p\r\n2,-2\r\n3,-1\r\n").unwrap();
        assert_eq!(seq.excluded(), &[11]);
        assert_eq!(seq.len(), 2);
    }

    #[test]
    fn unsorted_records_are_sorted() {
        let seq = parse("p,a_p\n5,0.1\n2,0.2\n").unwrap();
        assert_eq!(seq.entries()[0].p, 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("p,a_p\n").unwrap_err();
        assert!(matches!(e, Error::EmptySequence { .. }));

        let e = parse("p,a_p\n2,0.1\n4,0.5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("not prime"));

        let e = parse("p,a_p\n2,0.1\n2,0.2\n").unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");

        let e = parse("p,a_p\n2,inf\n").unwrap_err();
        assert!(e.to_string().contains("not finite"), "{e}");

        let e = parse("p,a\n2,0.1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));

        let e = parse("p,a_p\n2,abc\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));

        let e = parse("p,a_p\n2,0.1,7\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));

        let e = parse("p,a_p\n# late\n2,0.1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));

        let e = parse("# excluded: 2\np,a_p\n2,0.1\n").unwrap_err();
        assert!(matches!(e, Error::InvalidSequence(_)));
    }

    proptest! {
        #[test]
        fn write_then_load_is_bit_exact(
            values in proptest::collection::vec(-1.0e3f64..1.0e3, 1..40),
            excluded in proptest::bool::ANY,
        ) {
            let primes = crate::sources::first_primes(values.len() + 1).unwrap();
            let entries: Vec<Entry> = primes[..values.len()]
                .iter()
                .zip(&values)
                .map(|(&p, &a)| Entry { p, a })
                .collect();
            let ex = if excluded { vec![primes[values.len()]] } else { vec![] };
            let seq = EigenvalueSequence::new(entries, Source::Csv, ex).unwrap();
            let mut buf = Vec::new();
            write_csv(&seq, &mut buf).unwrap();
            let back = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(back.excluded(), seq.excluded());
            for (x, y) in back.entries().iter().zip(seq.entries()) {
                prop_assert_eq!(x.p, y.p);
                prop_assert_eq!(x.a.to_bits(), y.a.to_bits());
            }
        }
    }
}
