//! Truncated series S(z) = sum s_n z^n / n and H(z) = exp(S(z)) = sum h_n z^n / n!.
//!
//! Truncation is strict: reading a coefficient beyond the order is an error,
//! never an implicit zero.

mod hypotheses;
mod text;

use std::ops::Index;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{vp, Prime, Rat};
use crate::error::{Error, Result};

pub use hypotheses::{check_hypotheses, ConditionReport, HypothesisReport, Theorem, Verdict};
pub use text::{parse_series_text, write_count_lines, write_series_text, SeriesText};

/// Coefficients s_1..s_N of S(z) = sum s_n z^n / n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    s: Vec<Rat>,
}

impl LogSeries {
    /// Series with `s_n = coeffs[n - 1]`, so the order is `coeffs.len()`.
    pub fn new(coeffs: Vec<Rat>) -> LogSeries {
        LogSeries { s: coeffs }
    }

    pub fn zeros(order: usize) -> LogSeries {
        LogSeries::from_fn(order, |_| Rat::zero())
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> Rat) -> LogSeries {
        LogSeries { s: (1..=order).map(&mut f).collect() }
    }

    /// Integer data s_n = `data[n - 1]`.
    pub fn from_integers(data: &[i64]) -> LogSeries {
        LogSeries::new(data.iter().map(|&v| Rat::from_integer(v.into())).collect())
    }

    /// Series of order `order` with the given sparse nonzero coefficients.
    /// Indices beyond the order are dropped.
    pub fn from_sparse<'a>(order: usize, entries: impl IntoIterator<Item = (usize, &'a BigInt)>) -> LogSeries {
        let mut s = vec![Rat::zero(); order];
        for (n, v) in entries {
            if (1..=order).contains(&n) {
                s[n - 1] = Rat::from_integer(v.clone());
            }
        }
        LogSeries { s }
    }

    pub fn order(&self) -> usize {
        self.s.len()
    }

    pub fn get(&self, n: usize) -> Result<&Rat> {
        if n == 0 || n > self.s.len() {
            return Err(Error::OutOfRange { index: n, lo: 1, hi: self.s.len() });
        }
        Ok(&self.s[n - 1])
    }

    /// `(n, s_n)` for n = 1..=N.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.s.iter().enumerate().map(|(i, v)| (i + 1, v))
    }

    pub fn truncate(&self, order: usize) -> Result<LogSeries> {
        if order > self.order() {
            return Err(Error::MismatchedTruncation(order, self.order()));
        }
        Ok(LogSeries { s: self.s[..order].to_vec() })
    }

    /// First index whose coefficient has negative p-adic valuation.
    pub fn first_non_integral(&self, p: Prime) -> Option<usize> {
        self.iter().find(|(_, v)| !vp(v, p).at_least(0)).map(|(n, _)| n)
    }
}

impl Index<usize> for LogSeries {
    type Output = Rat;

    /// # Panics
    ///
    /// Panics outside `1..=order`.
    fn index(&self, n: usize) -> &Rat {
        assert!(n >= 1 && n <= self.s.len(), "index {n} outside 1..={}", self.s.len());
        &self.s[n - 1]
    }
}

/// Coefficients h_0..h_N of H(z) = sum h_n z^n / n!.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSeries {
    h: Vec<Rat>,
}

impl ExpSeries {
    /// Series with `h_n = coeffs[n]`; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Rat>) -> ExpSeries {
        assert!(!coeffs.is_empty(), "an exponential series needs h_0");
        ExpSeries { h: coeffs }
    }

    pub fn from_integers(data: &[i64]) -> ExpSeries {
        ExpSeries::new(data.iter().map(|&v| Rat::from_integer(v.into())).collect())
    }

    pub fn order(&self) -> usize {
        self.h.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&Rat> {
        self.h.get(n).ok_or(Error::OutOfRange { index: n, lo: 0, hi: self.order() })
    }

    /// `(n, h_n)` for n = 0..=N.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.h.iter().enumerate()
    }

    pub fn truncate(&self, order: usize) -> Result<ExpSeries> {
        if order > self.order() {
            return Err(Error::MismatchedTruncation(order, self.order()));
        }
        Ok(ExpSeries { h: self.h[..=order].to_vec() })
    }
}

impl Index<usize> for ExpSeries {
    type Output = Rat;

    /// # Panics
    ///
    /// Panics outside `0..=order`.
    fn index(&self, n: usize) -> &Rat {
        &self.h[n]
    }
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rat>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// exp: h_0 = 1 and h_n = sum_{k=1}^n (n-k+1)_{k-1} s_k h_{n-k}.
///
/// Denominators are cleared first: with D the lcm of the denominators of s,
/// g_n = D^n h_n is an integer sequence obeying the same recurrence with
/// s_k replaced by D^k s_k. Each step uses whichever of two evaluation
/// orders is cheaper: a sum over the nonzero s_k, or Horner's rule over all k.
pub fn exp_transform(s: &LogSeries) -> ExpSeries {
    let order = s.order();
    let d = lcm_of_denominators(s.s.iter());
    let mut w: Vec<BigInt> = Vec::with_capacity(order + 1);
    w.push(BigInt::zero());
    let mut dk = BigInt::one();
    for v in &s.s {
        dk *= &d;
        w.push(v.numer() * (&dk / v.denom()));
    }
    let support: Vec<usize> = (1..=order).filter(|&k| !w[k].is_zero()).collect();

    let mut g: Vec<BigInt> = Vec::with_capacity(order + 1);
    g.push(BigInt::one());
    for n in 1..=order {
        let end = support.partition_point(|&k| k <= n);
        let sparse_cost: usize = support[..end].iter().map(|&k| k - 1).sum();
        let value = if sparse_cost < n {
            let mut acc = BigInt::zero();
            for &k in &support[..end] {
                // (n-1)(n-2)...(n-k+1)
                let falling = ((n - k + 1)..n).fold(BigUint::one(), |f, i| f * i);
                acc += BigInt::from(falling) * &w[k] * &g[n - k];
            }
            acc
        } else {
            let mut acc = &w[n] * &g[0];
            for j in 1..n {
                acc *= j;
                if !w[n - j].is_zero() {
                    acc += &w[n - j] * &g[j];
                }
            }
            acc
        };
        g.push(value);
    }

    let mut h = Vec::with_capacity(order + 1);
    let mut dn = BigInt::one();
    for gn in g {
        h.push(Rat::new(gn, dn.clone()));
        dn *= &d;
    }
    ExpSeries { h }
}

/// log, the inverse of [`exp_transform`].
///
/// With r_k = (k-1)! s_k the recurrence reads
/// h_n = sum_{k=1}^n C(n-1, k-1) r_k h_{n-k}, which is solved for r_n.
pub fn log_transform(h: &ExpSeries) -> Result<LogSeries> {
    if !h.h[0].is_one() {
        return Err(Error::NotExponential);
    }
    let order = h.order();
    if h.h.iter().all(|v| v.is_integer()) {
        let hi: Vec<BigInt> = h.h.iter().map(|v| v.numer().clone()).collect();
        let mut r: Vec<BigInt> = vec![BigInt::zero()];
        let mut s = Vec::with_capacity(order);
        let mut fact = BigInt::one();
        for n in 1..=order {
            let mut acc = hi[n].clone();
            let mut binom = BigInt::one();
            for k in 1..n {
                acc -= &binom * &r[k] * &hi[n - k];
                binom = binom * (n - k) / k;
            }
            s.push(Rat::new(acc.clone(), fact.clone()));
            r.push(acc);
            fact *= n;
        }
        return Ok(LogSeries { s });
    }
    let mut r: Vec<Rat> = vec![Rat::zero()];
    let mut s = Vec::with_capacity(order);
    let mut fact = BigInt::one();
    for n in 1..=order {
        let mut acc = h.h[n].clone();
        let mut binom = BigInt::one();
        for k in 1..n {
            acc -= Rat::from_integer(binom.clone()) * &r[k] * &h.h[n - k];
            binom = binom * (n - k) / k;
        }
        s.push(&acc / Rat::from_integer(fact.clone()));
        r.push(acc);
        fact *= n;
    }
    Ok(LogSeries { s })
}

/// Coefficients g_1..g_N of S(z^p) - p S(z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DworkGap {
    p: Prime,
    g: Vec<Rat>,
}

impl DworkGap {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn order(&self) -> usize {
        self.g.len()
    }

    pub fn get(&self, j: usize) -> Result<&Rat> {
        if j == 0 || j > self.g.len() {
            return Err(Error::OutOfRange { index: j, lo: 1, hi: self.g.len() });
        }
        Ok(&self.g[j - 1])
    }

    /// First j in `1..end` (clamped to the order) with v_p(g_j) < 1.
    pub fn first_failure_below(&self, end: usize) -> Option<usize> {
        let end = end.min(self.g.len() + 1);
        (1..end).find(|&j| !vp(&self.g[j - 1], self.p).at_least(1))
    }
}

/// g_j = p s_{j/p} / j - p s_j / j, the first term present only when p | j.
pub fn dwork_gap(s: &LogSeries, p: Prime) -> DworkGap {
    let pu = p.get() as usize;
    let pr = Rat::from_integer(BigInt::from(p.get()));
    let g = s
        .iter()
        .map(|(j, sj)| {
            let jr = Rat::from_integer(BigInt::from(j));
            let mut gj = -(&pr * sj) / &jr;
            if j % pu == 0 {
                gj += &pr * &s[j / pu] / &jr;
            }
            gj
        })
        .collect();
    DworkGap { p, g }
}

/// Largest l >= 1 with v_p(g_j) >= 1 for all j < p^l and p^l - 1 <= N;
/// 0 if no such l exists.
pub fn truncation_level(s: &LogSeries, p: Prime) -> Result<u32> {
    if let Some(n) = s.first_non_integral(p) {
        return Err(Error::NotIntegral(n));
    }
    let gap = dwork_gap(s, p);
    let mut l = 0;
    loop {
        let Some(pl) = p.checked_pow(l + 1) else { break };
        if pl - 1 > s.order() as u64 || gap.first_failure_below(pl as usize).is_some() {
            break;
        }
        l += 1;
    }
    Ok(l)
}

/// Index i / p^e for the minimal e with i / p^e < p^l, or `None` when the
/// p-free part of i is already at least p^l.
pub fn lambda_anchor(i: usize, p: Prime, l: u32) -> Option<usize> {
    let pu = p.get() as usize;
    let pl = p.pow_sat(l) as usize;
    let mut free = i;
    while free % pu == 0 {
        free /= pu;
    }
    if free >= pl {
        return None;
    }
    let mut j = i;
    while j >= pl {
        j /= pu;
    }
    Some(j)
}

/// Tail corrections lambda_i for p^l < i <= N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSeq {
    p: Prime,
    l: u32,
    start: usize,
    values: Vec<Rat>,
}

impl LambdaSeq {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.l
    }

    /// lambda_i, or `None` when i <= p^l or i > N.
    pub fn get(&self, i: usize) -> Option<&Rat> {
        i.checked_sub(self.start).and_then(|k| self.values.get(k))
    }

    /// `(i, lambda_i)` for p^l < i <= N.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.values.iter().enumerate().map(move |(k, v)| (k + self.start, v))
    }
}

/// lambda_i = s_i when the p-free part of i is at least p^l, otherwise
/// s_i - s_{i/p^e} with e minimal such that i/p^e < p^l.
pub fn lambda_sequence(s: &LogSeries, p: Prime, l: u32) -> Result<LambdaSeq> {
    let pl = p
        .checked_pow(l)
        .filter(|&q| q as usize <= s.order())
        .ok_or_else(|| Error::InvalidParameters(format!("p^l = {}^{l} exceeds the truncation {}", p, s.order())))?;
    let start = pl as usize + 1;
    let values = (start..=s.order())
        .map(|i| match lambda_anchor(i, p, l) {
            None => s[i].clone(),
            Some(j) => &s[i] - &s[j],
        })
        .collect();
    Ok(LambdaSeq { p, l, start, values })
}

/// The comparison series whose coefficients agree with s below p^l, equal
/// s_{p^(l-1)} at p^l, and equal s_i - lambda_i above p^l. It satisfies the
/// full Dwork condition whenever s satisfies it below p^l.
pub fn reference_series(s: &LogSeries, p: Prime, l: u32) -> Result<LogSeries> {
    if l == 0 {
        return Err(Error::InvalidParameters("reference series needs l >= 1".into()));
    }
    let lambda = lambda_sequence(s, p, l)?;
    let pl = p.pow_sat(l) as usize;
    Ok(LogSeries::from_fn(s.order(), |i| {
        if i < pl {
            s[i].clone()
        } else if i == pl {
            s[pl / p.get() as usize].clone()
        } else {
            &s[i] - lambda.get(i).expect("lambda covers (p^l, N]")
        }
    }))
}
