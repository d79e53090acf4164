//! Exact rationals, p-adic valuations and small integer kernels.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

/// A prime number, validated on construction by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e` as a `u64`, or `None` on overflow.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }

    /// `p^e` saturating at `u64::MAX`; handy for loop bounds.
    pub fn pow_sat(self, e: u32) -> u64 {
        self.0.saturating_pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
///
/// `Finite(_) < Infinite`, so comparisons against bounds work directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= k`; always true for `Infinite`.
    pub fn at_least(self, k: i64) -> bool {
        self >= Valuation::Finite(k)
    }

    /// `self - k`, keeping `Infinite` infinite.
    pub fn minus(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v - k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Largest power of `p` that fits in a `u64`, with its exponent.
fn chunk(p: u64) -> (u64, u64) {
    let mut q = p;
    let mut e = 1;
    while let Some(next) = q.checked_mul(p) {
        q = next;
        e += 1;
    }
    (q, e)
}

/// v_p of a nonzero natural number; `None` for zero.
pub fn vp_uint(x: &BigUint, p: Prime) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = p.get();
    if p == 2 {
        return x.trailing_zeros();
    }
    let mut x = x.clone();
    let mut v = 0;
    let (big, e) = chunk(p);
    let big = BigUint::from(big);
    loop {
        let (q, r) = x.div_rem(&big);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += e;
    }
    let small = BigUint::from(p);
    loop {
        let (q, r) = x.div_rem(&small);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    Some(v)
}

/// v_p of an integer; `None` for zero.
pub fn vp_int(x: &BigInt, p: Prime) -> Option<u64> {
    vp_uint(x.magnitude(), p)
}

/// v_p of a rational: v_p(numerator) - v_p(denominator).
pub fn vp(x: &Rat, p: Prime) -> Valuation {
    match vp_int(x.numer(), p) {
        None => Valuation::Infinite,
        Some(a) => {
            let b = vp_int(x.denom(), p).unwrap_or(0);
            Valuation::Finite(a as i64 - b as i64)
        }
    }
}

/// Reduction mod p of a p-integral rational; `None` when v_p(x) < 0.
pub fn residue_mod_p(x: &Rat, p: Prime) -> Option<u64> {
    let pb = BigInt::from(p.get());
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = den.to_u64()?;
    Some(num * inverse_mod(den, p.get()) % p.get())
}

/// Inverse of `a` modulo the prime `p`; `a` must be a unit.
pub fn inverse_mod(a: u64, p: u64) -> u64 {
    let e = i64::try_from(p).expect("small prime").extended_gcd(&(a as i64 % p as i64));
    debug_assert_eq!(e.gcd, 1);
    e.y.rem_euclid(p as i64) as u64
}

/// Legendre's formula: v_p(n!) = sum over s >= 1 of floor(n / p^s).
pub fn legendre_valuation(n: u64, p: Prime) -> u64 {
    let mut total = 0;
    let mut m = n;
    while m > 0 {
        m /= p.get();
        total += m;
    }
    total
}

/// Rising factorial alpha (alpha + 1) ... (alpha + n - 1); 1 when n = 0.
pub fn pochhammer(alpha: i64, n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..n {
        acc *= alpha + i as i64;
    }
    acc
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Gaussian binomial coefficient `[m choose k]_q` evaluated at the integer `q`.
///
/// Returns 0 when `k < 0` or `k > m`.
///
/// # Panics
///
/// Panics if `q < 2`.
pub fn gauss_binom_at(m: u64, k: i64, q: u64) -> BigInt {
    assert!(q >= 2, "gauss_binom_at requires q >= 2");
    if k < 0 || k as u64 > m {
        return BigInt::zero();
    }
    let k = k as u64;
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= num_traits::pow(q.clone(), (m - i) as usize) - 1;
        den *= num_traits::pow(q.clone(), (i + 1) as usize) - 1;
    }
    num / den
}

/// floor(a / b) for b > 0.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// ceil(a / b) for b > 0.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// floor(log_p n) for n >= 1.
pub fn ilog(p: Prime, n: u64) -> u32 {
    assert!(n >= 1);
    n.ilog(p.get())
}

/// v_p of a positive machine integer.
pub fn vp_u64(mut n: u64, p: Prime) -> u32 {
    assert!(n > 0);
    let mut v = 0;
    while n % p.get() == 0 {
        n /= p.get();
        v += 1;
    }
    v
}

/// Sum over s >= `from` of floor(n / (c * p^s)), stopping once c * p^s > n.
pub fn floor_sum(n: u64, p: Prime, from: u32, c: u64) -> i64 {
    let mut total = 0i64;
    let mut s = from;
    loop {
        let Some(d) = p.checked_pow(s).and_then(|q| q.checked_mul(c)) else {
            break;
        };
        if d > n {
            break;
        }
        total += (n / d) as i64;
        s += 1;
    }
    total
}

/// Convert a signed integer to a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Build a rational from numerator and denominator (denominator nonzero).
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}
