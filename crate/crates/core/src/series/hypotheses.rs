use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::{dwork_gap, lambda_sequence, LogSeries};
use crate::arith::{ceil_div, floor_div, ilog, vp, vp_u64, Prime, Rat};
use crate::error::{Error, Result};

/// The divisibility statements whose hypotheses can be checked on a series.
///
/// Identifiers (see [`Theorem::id`]) are the names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Gap below p^l, a congruence mod p^m at p^(l-1), p^l, and a valuation
    /// floor on the tail corrections lambda_i.
    TailCorrected,
    /// p-integral coefficients and gap below p^l.
    IntegralGap,
    /// Coefficients supported on powers of p; finitely many tail conditions.
    PowerSupported,
    /// The p = 2 refinement with congruences at 2^(l-1), 2^l, 2^(l+1).
    Dyadic,
    /// Gap through z^(p^l) for odd p, (p, l) != (3, 1).
    GapThrough,
    /// Gap through z^3 for p = 3.
    TernaryGap,
    /// Gap through z^(2^l) for p = 2.
    DyadicGap,
    /// Gap below 2 p^l for odd p, (p, l) != (3, 1).
    DoubleGap,
    /// s_1 = s_p mod p for p-integral coefficients.
    DividingLine,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::TailCorrected,
        Theorem::IntegralGap,
        Theorem::PowerSupported,
        Theorem::Dyadic,
        Theorem::GapThrough,
        Theorem::TernaryGap,
        Theorem::DyadicGap,
        Theorem::DoubleGap,
        Theorem::DividingLine,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::TailCorrected => "thm2.1",
            Theorem::IntegralGap => "cor2.4",
            Theorem::PowerSupported => "cor2.5",
            Theorem::Dyadic => "thm2.7",
            Theorem::GapThrough => "thm3.1",
            Theorem::TernaryGap => "thm3.3",
            Theorem::DyadicGap => "thm3.4",
            Theorem::DoubleGap => "thm3.7",
            Theorem::DividingLine => "cor3.6",
        }
    }

    /// Check the parameter ranges; `m` is only meaningful for the two
    /// statements that take it.
    pub fn validate(self, p: Prime, l: u32, m: u32) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameters(format!("{}: {msg}", self.id())));
        let p = p.get();
        match self {
            Theorem::TailCorrected | Theorem::PowerSupported if m >= l => bad("requires 0 <= m < l"),
            Theorem::IntegralGap | Theorem::DyadicGap if l < 1 => bad("requires l >= 1"),
            Theorem::Dyadic if p != 2 || l < 2 => bad("requires p = 2 and l >= 2"),
            Theorem::GapThrough | Theorem::DoubleGap if p < 3 || l < 1 || (p, l) == (3, 1) => {
                bad("requires p >= 3, l >= 1 and (p, l) != (3, 1)")
            }
            Theorem::TernaryGap if p != 3 => bad("requires p = 3"),
            Theorem::DyadicGap if p != 2 => bad("requires p = 2"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theorem> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Needs coefficients beyond the truncation.
    Unverifiable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: &'static str,
    pub verdict: Verdict,
    pub first_failure: Option<usize>,
    /// Largest index inspected; open-ended conditions hold only this far.
    pub checked_through: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub theorem: &'static str,
    pub p: Prime,
    pub l: u32,
    pub m: u32,
    pub conditions: Vec<ConditionReport>,
    pub overall: Verdict,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

/// Outcome of a condition over the indices `1..=needed`, of which only
/// `1..=order` exist.
fn over_range(
    condition: &'static str,
    order: usize,
    needed: usize,
    mut ok: impl FnMut(usize) -> bool,
) -> ConditionReport {
    let through = needed.min(order);
    let first_failure = (1..=through).find(|&i| !ok(i));
    let verdict = match first_failure {
        Some(_) => Verdict::Fail,
        None if needed > order => Verdict::Unverifiable,
        None => Verdict::Pass,
    };
    ConditionReport { condition, verdict, first_failure, checked_through: through }
}

/// A single congruence-type condition touching indices up to `needed`.
fn single(condition: &'static str, order: usize, needed: usize, ok: impl FnOnce() -> bool) -> ConditionReport {
    if needed > order {
        return ConditionReport { condition, verdict: Verdict::Unverifiable, first_failure: None, checked_through: order };
    }
    let pass = ok();
    ConditionReport {
        condition,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        first_failure: (!pass).then_some(needed),
        checked_through: needed,
    }
}

fn integral(s: &LogSeries, p: Prime) -> ConditionReport {
    over_range("p_integral", s.order(), s.order(), |n| vp(&s[n], p).at_least(0))
}

/// v_p(g_j) >= 1 for 1 <= j < end.
fn gap_below(s: &LogSeries, p: Prime, end: usize) -> ConditionReport {
    let gap = dwork_gap(s, p);
    over_range("gap", s.order(), end - 1, |j| vp(gap.get(j).expect("in range"), p).at_least(1))
}

fn diff_at_least(s: &LogSeries, p: Prime, a: usize, b: usize, k: i64) -> bool {
    vp(&(&s[a] - &s[b]), p).at_least(k)
}

/// Integer power p^e for indices, saturating far beyond any truncation.
fn pw(p: Prime, e: u32) -> usize {
    p.pow_sat(e).min(usize::MAX as u64) as usize
}

/// (p^k - 1) / (p - 1).
fn repunit(p: Prime, k: u32) -> i64 {
    (0..k).map(|i| p.pow_sat(i) as i64).sum()
}

fn tail_corrections(s: &LogSeries, p: Prime, l: u32, m: u32) -> ConditionReport {
    let pl = pw(p, l);
    if pl > s.order() {
        return ConditionReport {
            condition: "lambda_valuation",
            verdict: Verdict::Unverifiable,
            first_failure: None,
            checked_through: s.order(),
        };
    }
    let lambda = lambda_sequence(s, p, l).expect("p^l within truncation");
    let first_failure = lambda
        .iter()
        .find(|(i, li)| {
            let bound = -((l - m) as i64) * (*i / pl) as i64 + vp_u64(*i as u64, p) as i64
                - repunit(p, ilog(p, *i as u64) - l)
                + 1;
            !vp(li, p).at_least(bound)
        })
        .map(|(i, _)| i);
    ConditionReport {
        condition: "lambda_valuation",
        verdict: if first_failure.is_some() { Verdict::Fail } else { Verdict::Pass },
        first_failure,
        checked_through: s.order(),
    }
}

fn dyadic_tail(s: &LogSeries, l: u32) -> ConditionReport {
    let p = Prime::new(2).expect("2 is prime");
    let pl = pw(p, l);
    if pl > s.order() {
        return ConditionReport {
            condition: "lambda_valuation",
            verdict: Verdict::Unverifiable,
            first_failure: None,
            checked_through: s.order(),
        };
    }
    let lambda = lambda_sequence(s, p, l).expect("2^l within truncation");
    let first_failure = lambda
        .iter()
        .filter(|(i, _)| *i != 2 * pl)
        .find(|(i, li)| {
            let i64i = *i as i64;
            let bound = -floor_div(i64i, pl as i64) + vp_u64(*i as u64, p) as i64
                - (1i64 << (ilog(p, *i as u64) - l))
                + ceil_div(i64i, 4 * pl as i64)
                + 1
                + (*i > 2 * pl) as i64;
            !vp(li, p).at_least(bound)
        })
        .map(|(i, _)| i);
    ConditionReport {
        condition: "lambda_valuation",
        verdict: if first_failure.is_some() { Verdict::Fail } else { Verdict::Pass },
        first_failure,
        checked_through: s.order(),
    }
}

fn power_support(s: &LogSeries, p: Prime) -> ConditionReport {
    over_range("prime_power_support", s.order(), s.order(), |n| {
        let mut k = n;
        while k % p.get() as usize == 0 {
            k /= p.get() as usize;
        }
        k == 1 || s[n].is_zero()
    })
}

/// v_p(s_{p^e} - s_{p^(l-1)}) >= -(l-m) p^(e-l) - (p^(e-l) - 1)/(p - 1) + e + 1
/// for all e with l < e and p^(e-l) < 2l + 1.
fn power_differences(s: &LogSeries, p: Prime, l: u32, m: u32) -> ConditionReport {
    let mut report = ConditionReport {
        condition: "power_difference_valuation",
        verdict: Verdict::Pass,
        first_failure: None,
        checked_through: s.order(),
    };
    let base = pw(p, l - 1);
    let mut e = l + 1;
    while p.pow_sat(e - l) < 2 * l as u64 + 1 {
        let idx = pw(p, e);
        if idx > s.order() {
            report.verdict = Verdict::Unverifiable;
            break;
        }
        let q = p.pow_sat(e - l) as i64;
        let bound = -((l - m) as i64) * q - repunit(p, e - l) + e as i64 + 1;
        if !vp(&(&s[idx] - &s[base]), p).at_least(bound) {
            report.verdict = Verdict::Fail;
            report.first_failure = Some(idx);
            break;
        }
        e += 1;
    }
    report
}

/// Check every hypothesis of `theorem` on the available coefficients.
///
/// `m` is ignored by statements without a congruence parameter.
pub fn check_hypotheses(s: &LogSeries, p: Prime, theorem: Theorem, l: u32, m: u32) -> Result<HypothesisReport> {
    theorem.validate(p, l, m)?;
    let n = s.order();
    let pl = pw(p, l);
    let conditions = match theorem {
        Theorem::TailCorrected => vec![
            gap_below(s, p, pl),
            single("difference_congruence", n, pl, || diff_at_least(s, p, pl / p.get() as usize, pl, m as i64)),
            tail_corrections(s, p, l, m),
        ],
        Theorem::IntegralGap => vec![integral(s, p), gap_below(s, p, pl)],
        Theorem::PowerSupported => vec![
            integral(s, p),
            power_support(s, p),
            gap_below(s, p, pl),
            single("difference_congruence", n, pl, || diff_at_least(s, p, pl / p.get() as usize, pl, m as i64)),
            power_differences(s, p, l, m),
        ],
        Theorem::Dyadic => {
            let (lo, mid, hi) = (pl / 2, pl, 2 * pl);
            vec![
                gap_below(s, p, pl),
                single("low_congruence", n, mid, || diff_at_least(s, p, lo, mid, l as i64 - 1)),
                single("high_congruence", n, hi, || diff_at_least(s, p, mid, hi, l as i64 - 2)),
                single("mixed_congruence", n, hi, || {
                    let lhs = &s[mid] - &s[lo];
                    let rhs = (&s[hi] - &s[mid]) * Rat::from_integer(2.into());
                    vp(&(lhs - rhs), p).at_least(l as i64)
                }),
                dyadic_tail(s, l),
            ]
        }
        Theorem::GapThrough | Theorem::DyadicGap => vec![integral(s, p), gap_below(s, p, pl + 1)],
        Theorem::TernaryGap => vec![integral(s, p), gap_below(s, p, 4)],
        Theorem::DoubleGap => vec![integral(s, p), gap_below(s, p, 2 * pl)],
        Theorem::DividingLine => {
            let pu = p.get() as usize;
            vec![integral(s, p), single("first_congruence", n, pu, || diff_at_least(s, p, 1, pu, 1))]
        }
    };
    let overall = if conditions.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if conditions.iter().any(|c| c.verdict == Verdict::Unverifiable) {
        Verdict::Unverifiable
    } else {
        Verdict::Pass
    };
    Ok(HypothesisReport { theorem: theorem.id(), p, l, m, conditions, overall })
}
