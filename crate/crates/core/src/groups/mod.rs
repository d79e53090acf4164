//! Subgroup counts s_n(G) for finite abelian p-groups, cyclic and dihedral
//! groups, and homomorphism counts h_n for free products of them.

mod brute;
mod spec;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{gauss_binom_at, vp_int, Prime, Rat};
use crate::error::{Error, Result};
use crate::series::{exp_transform, ExpSeries, LogSeries};

pub use brute::{abelian_subgroup_counts_bruteforce, dihedral_subgroup_counts_bruteforce};
pub use spec::GroupSpec;

/// Largest |a| accepted by the counting formula.
pub const MAX_TYPE_SIZE: u32 = 40;

/// Type (a_1 >= ... >= a_r >= 1) of C_{p^a_1} x ... x C_{p^a_r}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionType {
    p: Prime,
    parts: Vec<u32>,
}

impl PartitionType {
    pub fn new(p: Prime, parts: Vec<u32>) -> Result<PartitionType> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidParameters("a partition type needs positive parts".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameters("parts must be weakly decreasing".into()));
        }
        Ok(PartitionType { p, parts })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// |a| = a_1 + ... + a_r.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Vec<u32> {
        conjugate(&self.parts)
    }

    /// Every partition type of the given size, parts in decreasing order.
    pub fn all_of_size(p: Prime, size: u32) -> Vec<PartitionType> {
        fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if rest == 0 {
                out.push(prefix.clone());
                return;
            }
            for part in (1..=rest.min(max)).rev() {
                prefix.push(part);
                go(rest - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = vec![];
        go(size, size, &mut vec![], &mut out);
        out.into_iter().map(|parts| PartitionType { p, parts }).collect()
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "A[{};{}]", self.p, parts.join(","))
    }
}

/// Conjugate of a weakly decreasing sequence of positive integers.
pub fn conjugate(parts: &[u32]) -> Vec<u32> {
    let largest = parts.first().copied().unwrap_or(0);
    (1..=largest).map(|k| parts.iter().filter(|&&a| a >= k).count() as u32).collect()
}

/// s_n(G) stored sparsely; absent indices are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgroupCounts {
    counts: BTreeMap<u64, BigInt>,
}

impl SubgroupCounts {
    pub fn from_map(counts: BTreeMap<u64, BigInt>) -> SubgroupCounts {
        SubgroupCounts { counts: counts.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn get(&self, n: u64) -> BigInt {
        self.counts.get(&n).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.counts.iter().map(|(n, v)| (*n, v))
    }

    /// s_1..s_N as a series, zero outside the support.
    pub fn to_log_series(&self, order: usize) -> LogSeries {
        LogSeries::from_sparse(order, self.iter().map(|(n, v)| (n as usize, v)))
    }
}

/// Sub-partitions nu of mu (nu_i <= mu_i), as weakly decreasing sequences.
fn subpartitions(mu: &[u32]) -> Vec<Vec<u32>> {
    fn go(mu: &[u32], k: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        if k == mu.len() {
            return;
        }
        for part in 1..=max.min(mu[k]) {
            prefix.push(part);
            go(mu, k + 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    go(mu, 0, u32::MAX, &mut vec![], &mut out);
    out
}

/// Number of subgroups of type nu in an abelian p-group of type mu:
/// prod_i p^(nu'_{i+1} (mu'_i - nu'_i)) [mu'_i - nu'_{i+1} choose nu'_i - nu'_{i+1}]_p.
fn subgroups_of_type(p: u64, mu: &[u32], nu: &[u32]) -> BigInt {
    let mc = conjugate(mu);
    let nc = conjugate(nu);
    let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0) as i64;
    let mut total = BigInt::one();
    for i in 0..mc.len() {
        let (m, n, n_next) = (at(&mc, i), at(&nc, i), at(&nc, i + 1));
        total *= num_traits::pow(BigInt::from(p), (n_next * (m - n)) as usize);
        total *= gauss_binom_at((m - n_next) as u64, n - n_next, p);
    }
    total
}

/// s_{p^i}(G) for 0 <= i <= |a| via the subgroup-type counting formula.
/// Needs |a| <= 40 and p^|a| < 2^64.
pub fn abelian_subgroup_counts(t: &PartitionType) -> Result<SubgroupCounts> {
    let size = t.size();
    if size > MAX_TYPE_SIZE {
        return Err(Error::CapExceeded(format!("|a| = {size} exceeds {MAX_TYPE_SIZE}")));
    }
    let p = t.p.get();
    if t.p.checked_pow(size).is_none() {
        return Err(Error::CapExceeded(format!("index {p}^{size} does not fit in 64 bits")));
    }
    let mut by_order = vec![BigInt::zero(); size as usize + 1];
    for nu in subpartitions(&t.parts) {
        let k: u32 = nu.iter().sum();
        by_order[k as usize] += subgroups_of_type(p, &t.parts, &nu);
    }
    let counts = (0..=size)
        .map(|i| (num_traits::pow(p, i as usize), by_order[(size - i) as usize].clone()))
        .collect();
    Ok(SubgroupCounts { counts })
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Subgroup counts of a finite group given by a spec (not a free product).
///
/// The dihedral group of order 2m has d subgroups of index d generated by
/// reflections when d | m, plus one rotation subgroup of index d when d is
/// even and d/2 | m.
pub fn named_group_subgroup_counts(g: &GroupSpec) -> Result<SubgroupCounts> {
    match g {
        GroupSpec::Abelian(t) => abelian_subgroup_counts(t),
        GroupSpec::Cyclic(m) => Ok(SubgroupCounts {
            counts: divisors(*m).into_iter().map(|d| (d, BigInt::one())).collect(),
        }),
        GroupSpec::Dihedral(m) => Ok(SubgroupCounts::from_map(
            divisors(2 * m)
                .into_iter()
                .map(|d| {
                    let reflections = if m % d == 0 { d } else { 0 };
                    let rotations = (d % 2 == 0 && m % (d / 2) == 0) as u64;
                    (d, BigInt::from(reflections + rotations))
                })
                .collect(),
        )),
        GroupSpec::FreeProduct(_) => {
            Err(Error::InvalidParameters("free products have infinitely many subgroups; use hom_series".into()))
        }
    }
}

/// h_0..h_N for a group spec; free products multiply pointwise.
pub fn hom_series(g: &GroupSpec, order: usize) -> Result<ExpSeries> {
    match g {
        GroupSpec::FreeProduct(parts) => {
            let series = parts.iter().map(|part| hom_series(part, order)).collect::<Result<Vec<_>>>()?;
            free_product_hom(&series)
        }
        _ => Ok(exp_transform(&named_group_subgroup_counts(g)?.to_log_series(order))),
    }
}

/// h_n of a free product: the pointwise product of the factors' h_n.
pub fn free_product_hom(parts: &[ExpSeries]) -> Result<ExpSeries> {
    let first = parts.first().ok_or_else(|| Error::InvalidParameters("no factors".into()))?;
    let order = first.order();
    if let Some(other) = parts.iter().find(|h| h.order() != order) {
        return Err(Error::MismatchedTruncation(order, other.order()));
    }
    Ok(ExpSeries::new(
        (0..=order).map(|n| parts.iter().fold(Rat::one(), |acc, h| acc * &h[n])).collect(),
    ))
}

/// The three regimes of an abelian p-group type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AbelianCase {
    /// a_1 > a_2 + ... + a_r.
    Dominant,
    /// a_1 <= a_2 + ... + a_r and |a| even.
    Balanced,
    /// a_1 <= a_2 + ... + a_r and |a| odd.
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseClassification {
    pub case: AbelianCase,
    /// Parameters (l, m) of the tail-corrected bound that yields the result.
    pub l: u32,
    pub m: u32,
    /// Quotient congruence step p^l.
    pub step: u64,
    /// A_1 = |a|/2 (even) or A_2 = (|a|+1)/2 (odd); a_1 in the dominant case.
    pub half: u32,
    /// Balanced case with p = 2, which needs the dyadic refinement.
    pub dyadic_exception: bool,
}

pub fn classify_abelian_case(t: &PartitionType) -> CaseClassification {
    let size = t.size();
    let a1 = t.parts[0];
    let (case, l, m, half) = if a1 > size - a1 {
        (AbelianCase::Dominant, a1 + 1, size - a1, a1)
    } else if size % 2 == 0 {
        (AbelianCase::Balanced, size / 2 + 1, size / 2, size / 2)
    } else {
        let a2 = (size + 1) / 2;
        (AbelianCase::Odd, a2 + 1, a2 - 1, a2)
    };
    CaseClassification {
        case,
        l,
        m,
        step: t.p.pow_sat(l),
        half,
        dyadic_exception: case == AbelianCase::Balanced && t.p.get() == 2,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DifferenceProfile {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl DifferenceProfile {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Check the valuation pattern of d_i = s_{p^i} - s_{p^(i-1)}, 0 <= i <= |a|+1
/// (with s = 0 outside 1..p^|a|), the vanishing range, the leading term
/// -p^(|a|-i+1) at the critical i, and the symmetry s_{p^i} = s_{p^(|a|-i)}.
pub fn difference_valuation_profile(c: &SubgroupCounts, t: &PartitionType) -> DifferenceProfile {
    let p = t.p;
    let size = t.size() as i64;
    let a1 = t.parts[0] as i64;
    let s = |i: i64| if (0..=size).contains(&i) { c.get(p.pow_sat(i as u32)) } else { BigInt::zero() };
    let d = |i: i64| s(i) - s(i - 1);
    let v = |x: &BigInt| vp_int(x, p).map(|v| v as i64);
    let mut out = DifferenceProfile::default();

    // i <= min(|a| - a_1, |a|/2)
    for i in 0..=(size - a1).min(size / 2) {
        let got = v(&d(i));
        out.check(got == Some(i), || format!("v_p(d_{i}) = {got:?}, expected {i}"));
    }
    // max(a_1, |a|/2) + 1 <= i <= |a| + 1
    let low = a1.max((size + 1) / 2) + 1;
    for i in low..=size + 1 {
        let got = v(&d(i));
        out.check(got == Some(size - i + 1), || format!("v_p(d_{i}) = {got:?}, expected {}", size - i + 1));
    }
    for i in (size - a1 + 1)..=a1 {
        out.check(d(i).is_zero(), || format!("d_{i} should vanish"));
    }
    if size % 2 == 1 {
        let i = (size + 1) / 2;
        out.check(d(i).is_zero(), || format!("d_{i} should vanish for odd |a|"));
    }
    let lead = match classify_abelian_case(t).case {
        AbelianCase::Dominant => a1 + 1,
        AbelianCase::Balanced => size / 2 + 1,
        AbelianCase::Odd => (size + 1) / 2 + 1,
    };
    let e = size - lead + 1;
    let di = d(lead);
    let scale = num_traits::pow(BigInt::from(p.get()), e as usize);
    let (q, r) = di.div_rem(&scale);
    let unit = q.mod_floor(&BigInt::from(p.get()));
    out.check(
        r.is_zero() && unit.to_u64() == Some(p.get() - 1),
        || format!("d_{lead} = {di} is not -p^{e} plus higher terms"),
    );
    for i in 0..=size {
        out.check(s(i) == s(size - i), || format!("s_(p^{i}) != s_(p^{})", size - i));
    }
    out
}
