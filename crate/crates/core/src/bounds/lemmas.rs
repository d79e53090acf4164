//! Exhaustive checks of the two floor-sum inequalities behind the bounds.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::{ilog, Prime, Rat};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FloorLemmaReport {
    /// Pairs (i, j) with p^l <= i where
    /// sum_{s>=1} (floor(ij/p^(s+l)) - floor(j/p^s)) < j (p^(floor(log_p i) - l) - 1)/(p - 1).
    pub scaling_counterexamples: Vec<(u64, u64)>,
    pub scaling_checked: usize,
    /// Pairs (j, x) where j + floor(x) > floor(3j/2 + x) - floor(j/2)/2.
    pub halving_counterexamples: Vec<(i64, String)>,
    pub halving_checked: usize,
}

impl FloorLemmaReport {
    pub fn clean(&self) -> bool {
        self.scaling_counterexamples.is_empty() && self.halving_counterexamples.is_empty()
    }
}

fn scaling_holds(p: u64, l: u32, i: u64, j: u64) -> bool {
    let pl = p.pow(l) as u128;
    let (i, j) = (i as u128, j as u128);
    let p128 = p as u128;
    let mut lhs: i128 = 0;
    let mut ps = p128;
    while ps <= i * j / pl || ps <= j {
        lhs += (i * j / (ps * pl)) as i128 - (j / ps) as i128;
        ps *= p128;
    }
    let k = ilog(Prime::new(p).expect("prime"), i as u64) - l;
    let rhs = j as i128 * ((p128.pow(k) - 1) / (p128 - 1)) as i128;
    lhs >= rhs
}

fn halving_holds(j: i64, x: &Rat) -> bool {
    // Doubled to stay in integers: 2(j + floor x) <= 2 floor(3j/2 + x) - floor(j/2).
    let three_halves = Rat::new(BigInt::from(3 * j), BigInt::from(2)) + x;
    let lhs = BigInt::from(2) * (BigInt::from(j) + x.floor().to_integer());
    let rhs = BigInt::from(2) * three_halves.floor().to_integer() - BigInt::from(Integer::div_floor(&j, &2));
    lhs <= rhs
}

/// Run both inequalities over the grids: i in p^l..=i_max with j in 0..=j_max
/// for the first, every j in `halving_js` against every sample for the second.
pub fn floor_lemma_checks(
    p: Prime,
    l: u32,
    i_max: u64,
    j_max: u64,
    halving_js: RangeInclusive<i64>,
    x_samples: &[Rat],
) -> FloorLemmaReport {
    let mut report = FloorLemmaReport::default();
    let q = p.get();
    for i in q.pow(l).max(1)..=i_max {
        for j in 0..=j_max {
            report.scaling_checked += 1;
            if !scaling_holds(q, l, i, j) {
                report.scaling_counterexamples.push((i, j));
            }
        }
    }
    for j in halving_js {
        for x in x_samples {
            report.halving_checked += 1;
            if !halving_holds(j, x) {
                report.halving_counterexamples.push((j, x.to_string()));
            }
        }
    }
    report
}

/// All rationals a/b in [lo, hi] with 1 <= b <= max_den, sorted and deduplicated.
pub fn rational_grid(max_den: i64, lo: i64, hi: i64) -> Vec<Rat> {
    let mut out = BTreeSet::new();
    for b in 1..=max_den {
        for a in lo * b..=hi * b {
            out.insert(Rat::new(BigInt::from(a), BigInt::from(b)));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn scaling_example() {
        // p = 2, l = 1, i = 4, j = 3: left side (3 - 1) + (1 - 0) + 0 = 3, right side 3.
        assert!(scaling_holds(2, 1, 4, 3));
        assert!(scaling_holds(5, 0, 7, 0));
    }

    #[test]
    fn halving_examples() {
        assert!(halving_holds(0, &ratio(7, 3)));
        assert!(halving_holds(2, &ratio(0, 1)));
        // The inequality needs j >= 0: j = -1, x = 0 gives -1 <= -1.5.
        assert!(!halving_holds(-1, &ratio(0, 1)));
    }

    #[test]
    fn grid_shape() {
        let g = rational_grid(2, 0, 1);
        assert_eq!(g, vec![ratio(0, 1), ratio(1, 2), ratio(1, 1)]);
    }

    #[test]
    fn nonnegative_grid_is_clean() {
        let xs = rational_grid(8, -3, 3);
        for q in [2, 3, 5] {
            for l in 0..=3 {
                let r = floor_lemma_checks(Prime::new(q).unwrap(), l, 200, 50, 0..=100, &xs);
                assert!(r.clean(), "p={q} l={l}: {r:?}");
            }
        }
    }
}
