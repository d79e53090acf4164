//! Plain-text series documents: a header line `N p`, then one line
//! `n numerator denominator` per coefficient.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExpSeries, LogSeries};
use crate::arith::Rat;
use crate::error::{Error, Result};

/// A parsed series document. `p = 0` means no prime is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesText {
    pub order: usize,
    pub p: u64,
    pub entries: Vec<(usize, Rat)>,
}

impl SeriesText {
    pub fn from_log(s: &LogSeries, p: u64) -> SeriesText {
        SeriesText { order: s.order(), p, entries: s.iter().map(|(n, v)| (n, v.clone())).collect() }
    }

    pub fn from_exp(h: &ExpSeries, p: u64) -> SeriesText {
        SeriesText { order: h.order(), p, entries: h.iter().map(|(n, v)| (n, v.clone())).collect() }
    }

    fn contiguous(&self, first: usize) -> Result<Vec<Rat>> {
        let expected = self.order + 1 - first;
        if self.entries.len() != expected {
            return Err(Error::Parse(format!("expected {expected} coefficients, found {}", self.entries.len())));
        }
        self.entries
            .iter()
            .enumerate()
            .map(|(k, (n, v))| {
                if *n == k + first {
                    Ok(v.clone())
                } else {
                    Err(Error::Parse(format!("expected index {}, found {n}", k + first)))
                }
            })
            .collect()
    }

    /// Interpret as s_1..s_N.
    pub fn into_log(self) -> Result<LogSeries> {
        Ok(LogSeries::new(self.contiguous(1)?))
    }

    /// Interpret as h_0..h_N.
    pub fn into_exp(self) -> Result<ExpSeries> {
        Ok(ExpSeries::new(self.contiguous(0)?))
    }
}

pub fn write_series_text(doc: &SeriesText) -> String {
    let mut out = format!("{} {}\n", doc.order, doc.p);
    for (n, v) in &doc.entries {
        writeln!(out, "{n} {} {}", v.numer(), v.denom()).expect("writing to a String");
    }
    out
}

pub fn parse_series_text(text: &str) -> Result<SeriesText> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty document".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [order, p] = fields[..] else {
        return Err(Error::Parse(format!("line 1: expected `N p`, found `{header}`")));
    };
    let order = order.parse().map_err(|_| Error::Parse(format!("line 1: bad order `{order}`")))?;
    let p = p.parse().map_err(|_| Error::Parse(format!("line 1: bad prime `{p}`")))?;
    let mut entries = Vec::new();
    for (k, line) in lines {
        let bad = || Error::Parse(format!("line {}: expected `n numerator denominator`, found `{line}`", k + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [n, num, den] = fields[..] else { return Err(bad()) };
        let n: usize = n.parse().map_err(|_| bad())?;
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den <= BigInt::zero() {
            return Err(Error::Parse(format!("line {}: denominator must be positive", k + 1)));
        }
        let v = Rat::new(num.clone(), den.clone());
        if v.numer() != &num || v.denom() != &den {
            return Err(Error::Parse(format!("line {}: fraction not in lowest terms", k + 1)));
        }
        entries.push((n, v));
    }
    Ok(SeriesText { order, p, entries })
}

/// Sparse `n value` lines for integer data such as subgroup counts.
pub fn write_count_lines<'a>(order: usize, p: u64, counts: impl IntoIterator<Item = (usize, &'a BigInt)>) -> String {
    let mut out = format!("{order} {p}\n");
    for (n, v) in counts {
        writeln!(out, "{n} {v} {}", BigInt::one()).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::series::exp_transform;

    #[test]
    fn round_trip_is_bit_exact() {
        let s = LogSeries::new(vec![ratio(1, 2), ratio(-7, 3), ratio(0, 1), ratio(10, 1)]);
        let text = write_series_text(&SeriesText::from_log(&s, 3));
        assert_eq!(text, "4 3\n1 1 2\n2 -7 3\n3 0 1\n4 10 1\n");
        let back = parse_series_text(&text).unwrap();
        assert_eq!(write_series_text(&back), text);
        assert_eq!(back.into_log().unwrap(), s);

        let h = exp_transform(&s);
        let text = write_series_text(&SeriesText::from_exp(&h, 3));
        assert_eq!(parse_series_text(&text).unwrap().into_exp().unwrap(), h);
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(parse_series_text("").is_err());
        assert!(parse_series_text("3\n").is_err());
        assert!(parse_series_text("2 2\n1 1 0\n").is_err());
        assert!(parse_series_text("2 2\n1 2 4\n").is_err());
        assert!(parse_series_text("2 2\n1 x 1\n").is_err());
        assert!(parse_series_text("2 2\n1 1 1\n").unwrap().into_log().is_err());
        assert!(parse_series_text("2 2\n1 1 1\n3 1 1\n").unwrap().into_log().is_err());
    }
}
