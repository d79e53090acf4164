use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::{vp, Prime, Valuation};
use crate::bounds::{Bound, BoundKind};
use crate::error::{Error, Result};
use crate::series::{check_hypotheses, exp_transform, HypothesisReport, LogSeries, Theorem};

/// How the cycle lengths a p^s (a in A) are cut off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleCutoff {
    /// a p^s < p^l.
    Below,
    /// a p^s <= p^l.
    Through,
    /// a p^s < 2 p^l.
    BelowDouble,
}

impl CycleCutoff {
    pub fn name(self) -> &'static str {
        match self {
            CycleCutoff::Below => "below",
            CycleCutoff::Through => "through",
            CycleCutoff::BelowDouble => "below-double",
        }
    }
}

impl FromStr for CycleCutoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<CycleCutoff> {
        match s {
            "below" => Ok(CycleCutoff::Below),
            "through" => Ok(CycleCutoff::Through),
            "below-double" => Ok(CycleCutoff::BelowDouble),
            _ => Err(Error::Parse(format!("unknown cycle rule `{s}` (below, through, below-double)"))),
        }
    }
}

impl fmt::Display for CycleCutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Permutations whose cycle lengths are a p^s with a in `multipliers`,
/// s >= 0, and a p^s within the cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleRule {
    pub cutoff: CycleCutoff,
    pub p: Prime,
    pub l: u32,
    pub multipliers: BTreeSet<u64>,
}

impl CycleRule {
    pub fn new(cutoff: CycleCutoff, p: Prime, l: u32, multipliers: BTreeSet<u64>) -> Result<CycleRule> {
        if l < 1 {
            return Err(Error::InvalidParameters("l must be positive".into()));
        }
        if multipliers.contains(&0) {
            return Err(Error::InvalidParameters("multipliers must be positive".into()));
        }
        Ok(CycleRule { cutoff, p, l, multipliers })
    }

    fn limit(&self) -> u64 {
        let pl = self.p.pow_sat(self.l);
        match self.cutoff {
            CycleCutoff::Below => pl - 1,
            CycleCutoff::Through => pl,
            CycleCutoff::BelowDouble => 2 * pl - 1,
        }
    }

    /// The allowed cycle lengths.
    pub fn allowed(&self) -> BTreeSet<u64> {
        let limit = self.limit();
        let mut out = BTreeSet::new();
        for &a in &self.multipliers {
            let mut len = a;
            while len <= limit {
                out.insert(len);
                len *= self.p.get();
            }
        }
        out
    }

    /// The statement whose hypotheses the specialised series must meet,
    /// and its bound.
    pub fn theorem(&self) -> Result<(Theorem, Bound)> {
        let (p, l) = (self.p, self.l);
        let theorem = match (self.cutoff, p.get(), l) {
            (CycleCutoff::Below, _, _) => Theorem::IntegralGap,
            (CycleCutoff::Through, 2, _) => Theorem::DyadicGap,
            (CycleCutoff::Through, 3, 1) => Theorem::TernaryGap,
            (CycleCutoff::Through, _, _) => Theorem::GapThrough,
            (CycleCutoff::BelowDouble, q, _) if q < 3 || (q, l) == (3, 1) => {
                return Err(Error::InvalidParameters("below-double needs p >= 3 and (p, l) != (3, 1)".into()))
            }
            (CycleCutoff::BelowDouble, _, _) => Theorem::DoubleGap,
        };
        let kind = match theorem {
            Theorem::IntegralGap => BoundKind::IntegralGap { l },
            Theorem::DyadicGap => BoundKind::DyadicGap { l },
            Theorem::TernaryGap => BoundKind::TernaryGap,
            Theorem::GapThrough => BoundKind::GapThrough { l },
            _ => BoundKind::DoubleGap { l },
        };
        Ok((theorem, Bound::new(p, kind)?))
    }
}

impl fmt::Display for CycleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.multipliers.iter().map(u64::to_string).collect();
        write!(f, "{}(p={},l={},A={{{}}})", self.cutoff, self.p, self.l, a.join(","))
    }
}

fn indicator_series(order: usize, allowed: &BTreeSet<u64>) -> LogSeries {
    let one = BigInt::one();
    LogSeries::from_sparse(order, allowed.iter().filter(|&&i| i as usize <= order).map(|&i| (i as usize, &one)))
}

/// Permutation counts for n = 0..=order with cycle lengths in `allowed`.
pub fn permutation_counts(order: usize, allowed: &BTreeSet<u64>) -> Vec<BigInt> {
    exp_transform(&indicator_series(order, allowed)).iter().map(|(_, h)| h.to_integer()).collect()
}

/// Number of permutations of {1..n} whose cycle lengths all lie in `allowed`.
pub fn permutation_count(n: usize, allowed: &BTreeSet<u64>) -> BigInt {
    permutation_counts(n, allowed).pop().expect("order n has n + 1 terms")
}

/// Enumeration oracle for n <= 9.
pub fn permutation_count_bruteforce(n: usize, allowed: &BTreeSet<u64>) -> Result<u64> {
    if n > 9 {
        return Err(Error::CapExceeded(format!("enumeration needs n <= 9 (got {n})")));
    }
    fn cycles_ok(perm: &[usize], allowed: &BTreeSet<u64>) -> bool {
        let mut seen = vec![false; perm.len()];
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            if !allowed.contains(&len) {
                return false;
            }
        }
        true
    }
    // Heap's algorithm.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut total = cycles_ok(&perm, allowed) as u64;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += cycles_ok(&perm, allowed) as u64;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct PermutationRow {
    pub n: usize,
    pub count: String,
    pub valuation: Valuation,
    pub bound: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PermutationReport {
    pub rule: CycleRule,
    pub allowed: Vec<u64>,
    pub bound: String,
    pub hypotheses: HypothesisReport,
    /// False when the specialised series misses the statement's hypotheses;
    /// the bound is then not asserted.
    pub admissible: bool,
    pub rows: Vec<PermutationRow>,
    pub violations: Vec<usize>,
}

impl PermutationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check v_p(count(n)) >= bound(n) for n <= n_max.
pub fn verify_permutation_divisibility(rule: &CycleRule, n_max: usize) -> Result<PermutationReport> {
    let (theorem, bound) = rule.theorem()?;
    let p = rule.p;
    let allowed = rule.allowed();
    // The hypotheses look at indices up to 2 p^l.
    let order = n_max.max(2 * p.pow_sat(rule.l) as usize);
    let s = indicator_series(order, &allowed);
    let hypotheses = check_hypotheses(&s, p, theorem, rule.l, 0)?;
    let admissible = hypotheses.passed();
    let h = exp_transform(&s);
    let mut rows = vec![];
    let mut violations = vec![];
    for (n, hn) in h.iter().take(n_max + 1) {
        let valuation = vp(hn, p);
        let b = bound.value(n as u64);
        if admissible && !valuation.at_least(b) {
            violations.push(n);
        }
        rows.push(PermutationRow { n, count: hn.to_integer().to_string(), valuation, bound: b });
    }
    Ok(PermutationReport {
        rule: rule.clone(),
        allowed: allowed.into_iter().collect(),
        bound: bound.to_string(),
        hypotheses,
        admissible,
        rows,
        violations,
    })
}

/// Every subset of {1..k}, as bit masks in increasing order.
pub fn subsets_of_range(k: u64) -> impl Iterator<Item = BTreeSet<u64>> {
    (0u64..1 << k).map(move |mask| (1..=k).filter(|i| mask >> (i - 1) & 1 == 1).collect())
}
