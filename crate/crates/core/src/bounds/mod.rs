//! Lower bounds for v_p(h_n), verification of computed sequences against
//! them, and the mod-p recurrences of the normalized quotients.

mod lemmas;

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::{ceil_div, floor_sum, residue_mod_p, vp, Prime, Rat, Valuation};
use crate::error::{Error, Result};
use crate::groups::{classify_abelian_case, AbelianCase, PartitionType};
use crate::series::{ExpSeries, LogSeries, Theorem};

pub use lemmas::{floor_lemma_checks, rational_grid, FloorLemmaReport};

/// Which exponent formula to evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// sum_{s=1}^{l-1} floor(n/p^s) - (l-m-1) floor(n/p^l), 0 <= m < l.
    TailCorrected { l: u32, m: u32 },
    /// The case m = 0 of `TailCorrected`.
    IntegralGap { l: u32 },
    /// p = 2, l >= 2: sum_{s=1}^{l-1} floor(n/2^s) + floor(n/2^(l+1)) - floor(n/2^(l+2)).
    Dyadic { l: u32 },
    /// Odd p, (p, l) != (3, 1): sum_{s>=1} floor(n/p^s) - (l-1) floor(n/p^l)
    /// - sum_{s>=l} floor(n/(2 p^s)).
    GapThrough { l: u32 },
    /// p = 3: sum_{s>=1} (floor(n/3^s) - floor(n/(2 3^s))) - floor(n/18).
    TernaryGap,
    /// p = 2, three branches in l.
    DyadicGap { l: u32 },
    /// The bound available once s_1 = s_p mod p, by the size of p.
    DividingLine,
    /// Like `GapThrough` with (l-1) ceil(n/(2p^l)) in place of (l-1) floor(n/p^l).
    DoubleGap { l: u32 },
    /// Nontrivial finite p-groups: floor(n/p) - floor(n/p^2).
    PGroup,
    /// Non-cyclic p-groups of odd order: floor(n/p) + floor(n/p^2) - 2 floor(n/p^3).
    NonCyclicOdd,
    /// Dihedral group of order 2m, p = 2.
    Dihedral { m: u64 },
    /// Finite abelian p-group of the given type, by its case.
    Abelian(PartitionType),
    /// Finite abelian 2-group in the even balanced case.
    AbelianDyadic(PartitionType),
    /// C_{p^big} x C_{p^small}: sum_{j=1}^{big} floor(n/p^j) - (big-small) floor(n/p^(big+1)).
    RankTwo { big: u32, small: u32 },
    /// p = 2: floor((n+2)/4).
    Involutions,
}

/// A validated bound: kind plus prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    p: Prime,
    kind: BoundKind,
}

impl Bound {
    pub fn new(p: Prime, kind: BoundKind) -> Result<Bound> {
        let q = p.get();
        let bad = |msg: &str| Err(Error::InvalidParameters(msg.to_string()));
        match &kind {
            BoundKind::TailCorrected { l, m } if m >= l => return bad("requires 0 <= m < l"),
            BoundKind::IntegralGap { l } | BoundKind::DyadicGap { l } if *l < 1 => return bad("requires l >= 1"),
            BoundKind::Dyadic { l } if q != 2 || *l < 2 => return bad("requires p = 2 and l >= 2"),
            BoundKind::GapThrough { l } | BoundKind::DoubleGap { l } if q < 3 || *l < 1 || (q, *l) == (3, 1) => {
                return bad("requires p >= 3, l >= 1 and (p, l) != (3, 1)")
            }
            BoundKind::TernaryGap if q != 3 => return bad("requires p = 3"),
            BoundKind::DyadicGap { .. } | BoundKind::Dihedral { .. } | BoundKind::Involutions if q != 2 => {
                return bad("requires p = 2")
            }
            BoundKind::NonCyclicOdd if q == 2 => return bad("requires odd p"),
            BoundKind::Dihedral { m } if *m < 1 => return bad("requires m >= 1"),
            BoundKind::Abelian(t) | BoundKind::AbelianDyadic(t) if t.prime() != p => {
                return bad("partition type carries a different prime")
            }
            BoundKind::AbelianDyadic(t) if q != 2 || classify_abelian_case(t).case != AbelianCase::Balanced => {
                return bad("requires p = 2 and a_1 <= a_2 + ... + a_r with |a| even")
            }
            BoundKind::RankTwo { big, small } if small > big => return bad("requires big >= small"),
            _ => {}
        }
        Ok(Bound { p, kind })
    }

    /// The bound attached to a checkable statement with the same parameters.
    pub fn for_theorem(theorem: Theorem, p: Prime, l: u32, m: u32) -> Result<Bound> {
        let kind = match theorem {
            Theorem::TailCorrected | Theorem::PowerSupported => BoundKind::TailCorrected { l, m },
            Theorem::IntegralGap => BoundKind::IntegralGap { l },
            Theorem::Dyadic => BoundKind::Dyadic { l },
            Theorem::GapThrough => BoundKind::GapThrough { l },
            Theorem::TernaryGap => BoundKind::TernaryGap,
            Theorem::DyadicGap => BoundKind::DyadicGap { l },
            Theorem::DoubleGap => BoundKind::DoubleGap { l },
            Theorem::DividingLine => BoundKind::DividingLine,
        };
        Bound::new(p, kind)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn kind(&self) -> &BoundKind {
        &self.kind
    }

    /// Exact value of the exponent at n.
    pub fn value(&self, n: u64) -> i64 {
        let p = self.p;
        let f = |d: u64| (n / d) as i64;
        let pw = |e: u32| p.pow_sat(e);
        // sum_{s=1}^{k} floor(n/p^s)
        let partial = |k: u32| (1..=k).map(|s| f(pw(s))).sum::<i64>();
        let full = floor_sum(n, p, 1, 1);
        match &self.kind {
            BoundKind::TailCorrected { l, m } => partial(l - 1) - (l - m - 1) as i64 * f(pw(*l)),
            BoundKind::IntegralGap { l } => partial(l - 1) - (l - 1) as i64 * f(pw(*l)),
            BoundKind::Dyadic { l } => partial(l - 1) + f(pw(l + 1)) - f(pw(l + 2)),
            BoundKind::GapThrough { l } => full - (l - 1) as i64 * f(pw(*l)) - floor_sum(n, p, *l, 2),
            BoundKind::TernaryGap => full - floor_sum(n, p, 1, 2) - f(18),
            BoundKind::DyadicGap { l } => match l {
                1 => f(2) - f(4),
                2 => f(2),
                _ => partial(l + 1) - (l - 1) as i64 * f(pw(*l)),
            },
            BoundKind::DividingLine => match p.get() {
                2 => f(2) - f(4),
                3 => full - floor_sum(n, p, 1, 2) - f(18),
                _ => full - floor_sum(n, p, 1, 2),
            },
            BoundKind::DoubleGap { l } => {
                full - (l - 1) as i64 * ceil_div(n as i64, 2 * pw(*l) as i64) - floor_sum(n, p, *l, 2)
            }
            BoundKind::PGroup => f(pw(1)) - f(pw(2)),
            BoundKind::NonCyclicOdd => f(pw(1)) + f(pw(2)) - 2 * f(pw(3)),
            BoundKind::Dihedral { m } => {
                if m % 4 == 0 {
                    f(2)
                } else {
                    f(2) - f(4)
                }
            }
            BoundKind::Abelian(t) => {
                let c = classify_abelian_case(t);
                match c.case {
                    AbelianCase::Dominant => {
                        let a1 = t.parts()[0];
                        let rest = t.size() - a1;
                        partial(a1) - (a1 - rest) as i64 * f(pw(a1 + 1))
                    }
                    AbelianCase::Balanced => partial(t.size() / 2),
                    AbelianCase::Odd => {
                        let a2 = (t.size() + 1) / 2;
                        partial(a2) - f(pw(a2 + 1))
                    }
                }
            }
            BoundKind::AbelianDyadic(t) => {
                let a1 = t.size() / 2;
                partial(a1) + f(pw(a1 + 2)) - f(pw(a1 + 3))
            }
            BoundKind::RankTwo { big, small } => partial(*big) - (big - small) as i64 * f(pw(big + 1)),
            BoundKind::Involutions => ((n + 2) / 4) as i64,
        }
    }

    /// Residue class (step) and multiplier source of the quotient congruence
    /// Q_n = c Q_{n - step} mod p, when one is known.
    fn quotient_rule(&self, s: &LogSeries) -> Result<(u64, u64)> {
        let p = self.p;
        let q = p.get();
        let sign = |e: u32| if e % 2 == 0 || q == 2 { 1 } else { q - 1 };
        let coefficient = |l: u32, m: u32| -> Result<u64> {
            let hi = p.pow_sat(l) as usize;
            let diff = s.get(hi)? - s.get(hi / q as usize)?;
            let scaled = diff / Rat::from_integer(num_traits::pow(BigInt::from(q), m as usize));
            let c = residue_mod_p(&scaled, p).ok_or(Error::MultiplierNotIntegral)?;
            Ok(c * sign(l) % q)
        };
        match &self.kind {
            BoundKind::TailCorrected { l, m } => Ok((p.pow_sat(*l), coefficient(*l, *m)?)),
            BoundKind::IntegralGap { l } => Ok((p.pow_sat(*l), coefficient(*l, 0)?)),
            BoundKind::Dyadic { l } => {
                let lo = p.pow_sat(*l) as usize;
                let diff = s.get(2 * lo)? - s.get(lo)?;
                let scaled = diff / Rat::from_integer(BigInt::one() << (*l as usize - 2));
                let c = residue_mod_p(&scaled, p).ok_or(Error::MultiplierNotIntegral)?;
                Ok((p.pow_sat(l + 2), c))
            }
            BoundKind::Abelian(t) => {
                let c = classify_abelian_case(t);
                if c.case == AbelianCase::Balanced && q == 2 {
                    return Err(Error::NoQuotientCongruence);
                }
                Ok((p.pow_sat(c.l), sign(c.l - 1)))
            }
            BoundKind::AbelianDyadic(t) => Ok((p.pow_sat(t.size() / 2 + 3), 1)),
            _ => Err(Error::NoQuotientCongruence),
        }
    }

    /// Residue classes n mod `modulus` where the statement asserts tightness
    /// (or, with `tight = false`, asserts its absence), given the data s.
    pub fn tightness_claims(&self, s: &LogSeries) -> Result<Vec<TightnessClaim>> {
        let p = self.p;
        let claim = |modulus: u64, residue: u64, tight: bool| TightnessClaim { modulus, residue, tight };
        let differs = |hi: usize, lo: usize, k: i64| -> Result<bool> {
            Ok(!vp(&(s.get(hi)? - s.get(lo)?), p).at_least(k))
        };
        Ok(match &self.kind {
            BoundKind::TailCorrected { l, m } => {
                let pl = p.pow_sat(*l);
                if differs(pl as usize, (pl / p.get()) as usize, *m as i64 + 1)? {
                    vec![claim(pl, 0, true)]
                } else {
                    vec![]
                }
            }
            BoundKind::IntegralGap { l } => {
                let pl = p.pow_sat(*l);
                if differs(pl as usize, (pl / p.get()) as usize, 1)? {
                    vec![claim(pl, 0, true)]
                } else {
                    vec![]
                }
            }
            BoundKind::Dyadic { l } => {
                let lo = 1usize << (l - 1);
                let (mid, hi) = (2 * lo, 4 * lo);
                let modulus = 4 * mid as u64;
                let mut out = vec![];
                if differs(mid, hi, *l as i64 - 1)? {
                    out.push(claim(modulus, 0, true));
                    out.push(claim(modulus, mid as u64, true));
                    // s_{2^(l-1)} - s_{2^(l+1)} mod 2^l against 2^(l-2) and 3 * 2^(l-2).
                    let d = s.get(lo)? - s.get(hi)?;
                    let unit = Rat::from_integer(BigInt::one() << (*l as usize - 2));
                    let two_l = *l as i64;
                    if vp(&(&d - &unit), p).at_least(two_l) {
                        out.push(claim(modulus, 2 * mid as u64, true));
                        out.push(claim(modulus, 3 * mid as u64, false));
                    } else if vp(&(&d - unit * Rat::from_integer(3.into())), p).at_least(two_l) {
                        out.push(claim(modulus, 2 * mid as u64, false));
                        out.push(claim(modulus, 3 * mid as u64, true));
                    }
                }
                out
            }
            BoundKind::Abelian(t) => {
                let c = classify_abelian_case(t);
                if c.case == AbelianCase::Balanced && p.get() == 2 {
                    vec![]
                } else {
                    vec![claim(p.pow_sat(c.l), 0, true)]
                }
            }
            BoundKind::AbelianDyadic(t) => {
                let a1 = t.size() / 2;
                let modulus = 1u64 << (a1 + 3);
                vec![claim(modulus, 0, true), claim(modulus, 1 << (a1 + 1), true), claim(modulus, 1 << (a1 + 2), true)]
            }
            _ => vec![],
        })
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match &self.kind {
            BoundKind::TailCorrected { l, m } => write!(f, "tail-corrected(p={p},l={l},m={m})"),
            BoundKind::IntegralGap { l } => write!(f, "integral-gap(p={p},l={l})"),
            BoundKind::Dyadic { l } => write!(f, "dyadic(p={p},l={l})"),
            BoundKind::GapThrough { l } => write!(f, "gap-through(p={p},l={l})"),
            BoundKind::TernaryGap => write!(f, "ternary-gap(p={p})"),
            BoundKind::DyadicGap { l } => write!(f, "dyadic-gap(p={p},l={l})"),
            BoundKind::DividingLine => write!(f, "dividing-line(p={p})"),
            BoundKind::DoubleGap { l } => write!(f, "double-gap(p={p},l={l})"),
            BoundKind::PGroup => write!(f, "p-group(p={p})"),
            BoundKind::NonCyclicOdd => write!(f, "non-cyclic-odd(p={p})"),
            BoundKind::Dihedral { m } => write!(f, "dihedral(p={p},m={m})"),
            BoundKind::Abelian(t) => write!(f, "abelian({t})"),
            BoundKind::AbelianDyadic(t) => write!(f, "abelian-dyadic({t})"),
            BoundKind::RankTwo { big, small } => write!(f, "rank-two(p={p},big={big},small={small})"),
            BoundKind::Involutions => write!(f, "involutions(p={p})"),
        }
    }
}

pub fn bound_value(bound: &Bound, n: u64) -> i64 {
    bound.value(n)
}

/// `tight` asserts v_p(h_n) = bound for every n = residue mod modulus;
/// `!tight` asserts strict inequality there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TightnessClaim {
    pub modulus: u64,
    pub residue: u64,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    pub valuation: Valuation,
    pub bound: i64,
    pub slack: Valuation,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub violations: Vec<usize>,
    pub min_slack: Valuation,
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub rows: Vec<VerifyRow>,
    pub summary: VerifySummary,
}

impl Verification {
    /// Indices inside the verified range that contradict a claim.
    pub fn claim_failures(&self, claims: &[TightnessClaim]) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| {
                claims
                    .iter()
                    .any(|c| r.n as u64 % c.modulus == c.residue && r.tight != c.tight)
            })
            .map(|r| r.n)
            .collect()
    }
}

pub fn verify_bounds(h: &ExpSeries, bound: &Bound, range: RangeInclusive<usize>) -> Result<Verification> {
    if *range.end() > h.order() {
        return Err(Error::OutOfRange { index: *range.end(), lo: 0, hi: h.order() });
    }
    let rows: Vec<VerifyRow> = range
        .map(|n| {
            let valuation = vp(&h[n], bound.p);
            let b = bound.value(n as u64);
            let slack = valuation.minus(b);
            VerifyRow { n, valuation, bound: b, slack, tight: slack == Valuation::Finite(0) }
        })
        .collect();
    let summary = VerifySummary {
        violations: rows.iter().filter(|r| r.slack < Valuation::Finite(0)).map(|r| r.n).collect(),
        min_slack: rows.iter().map(|r| r.slack).min().unwrap_or(Valuation::Infinite),
        tight: rows.iter().filter(|r| r.tight).map(|r| r.n).collect(),
    };
    Ok(Verification { rows, summary })
}

/// Q_n = h_n / p^e(n) reduced mod p, for n = 0..=N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSeq {
    pub p: Prime,
    pub residues: Vec<u64>,
}

pub fn q_sequence(h: &ExpSeries, bound: &Bound) -> Result<QSeq> {
    let p = bound.p;
    let pb = BigInt::from(p.get());
    let residues = h
        .iter()
        .map(|(n, hn)| {
            let e = bound.value(n as u64);
            match vp(hn, p) {
                Valuation::Infinite => Ok(0),
                Valuation::Finite(v) if v < e => Err(Error::BoundViolated(n)),
                Valuation::Finite(v) if v > e => Ok(0),
                Valuation::Finite(_) => {
                    let scale = Rat::from_integer(num_traits::pow(pb.clone(), e.unsigned_abs() as usize));
                    let q = if e >= 0 { hn / scale } else { hn * scale };
                    Ok(residue_mod_p(&q, p).expect("unit after normalization"))
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(QSeq { p, residues })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QRecurrence {
    pub step: u64,
    pub multiplier: u64,
    pub checked: usize,
    pub failures: Vec<usize>,
}

impl QRecurrence {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check Q_n = c Q_{n-step} mod p for every step <= n <= N.
pub fn verify_q_recurrence(q: &QSeq, bound: &Bound, s: &LogSeries) -> Result<QRecurrence> {
    let (step, multiplier) = bound.quotient_rule(s)?;
    let p = q.p.get();
    let step_u = step as usize;
    let mut failures = vec![];
    let mut checked = 0;
    for n in step_u..q.residues.len() {
        checked += 1;
        if q.residues[n] != multiplier * q.residues[n - step_u] % p {
            failures.push(n);
        }
    }
    Ok(QRecurrence { step, multiplier, checked, failures })
}
