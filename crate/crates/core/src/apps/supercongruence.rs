use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorial, Prime};
use crate::error::{Error, Result};
use crate::series::{exp_transform, ExpSeries, LogSeries};

/// One instance of the congruence
///
/// sum_{s=0}^{pa+b} N! / (p^(pa+b-s) (pa+b-s)! (ps+c)!)
///   = (-1)^a p^((p-1)a) sum_{s=0}^{b} (pb+c)! / (p^(b-s) (b-s)! (ps+c)!)
///
/// modulo p^((p-1)a+b+1), where N = p^2 a + p b + c.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupercongInstance {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    #[serde(serialize_with = "as_string")]
    pub lhs: BigInt,
    #[serde(serialize_with = "as_string")]
    pub rhs: BigInt,
    pub modulus_exponent: u64,
    #[serde(serialize_with = "as_string")]
    pub modulus: BigInt,
    pub pass: bool,
    /// lhs equals the coefficient h_N of exp(z + z^p/p).
    pub series_agrees: bool,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl SupercongInstance {
    pub fn ok(&self) -> bool {
        self.pass && self.series_agrees
    }
}

/// sum_{s=0}^{k} (pk + c)! / (p^(k-s) (k-s)! (ps+c)!), each term checked integral.
fn falling_sum(p: u64, k: u64, c: u64) -> Result<BigInt> {
    let top = BigInt::from(factorial(p * k + c));
    let mut total = BigInt::zero();
    for s in 0..=k {
        let den = num_traits::pow(BigInt::from(p), (k - s) as usize)
            * BigInt::from(factorial(k - s))
            * BigInt::from(factorial(p * s + c));
        let (q, r) = top.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::NonIntegralSummand(s as usize));
        }
        total += q;
    }
    Ok(total)
}

/// exp(z + z^p/p) through index `order`.
pub fn supercongruence_series(p: Prime, order: usize) -> ExpSeries {
    let one = BigInt::one();
    let mut entries = vec![(1, &one)];
    if p.get() as usize <= order {
        entries.push((p.get() as usize, &one));
    }
    exp_transform(&LogSeries::from_sparse(order, entries))
}

/// Check one instance against a precomputed series of order >= p^2 a + p b + c.
pub fn supercongruence_check_with(h: &ExpSeries, p: Prime, a: u64, b: u64, c: u64) -> Result<SupercongInstance> {
    let q = p.get();
    if a < 1 || b >= q || c >= q {
        return Err(Error::InvalidParameters("requires a >= 1 and 0 <= b, c < p".into()));
    }
    let n = (q * q * a + q * b + c) as usize;
    let lhs = falling_sum(q, q * a + b, c)?;
    let sign = if a % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let rhs = sign * num_traits::pow(BigInt::from(q), ((q - 1) * a) as usize) * falling_sum(q, b, c)?;
    let modulus_exponent = (q - 1) * a + b + 1;
    let modulus = num_traits::pow(BigInt::from(q), modulus_exponent as usize);
    let pass = (&lhs - &rhs).mod_floor(&modulus).is_zero();
    let coefficient = h.get(n)?;
    let series_agrees = coefficient.is_integer() && coefficient.numer() == &lhs;
    Ok(SupercongInstance { p: q, a, b, c, lhs, rhs, modulus_exponent, modulus, pass, series_agrees })
}

pub fn supercongruence_check(p: Prime, a: u64, b: u64, c: u64) -> Result<SupercongInstance> {
    let q = p.get();
    let n = (q * q * a + q * b + c) as usize;
    supercongruence_check_with(&supercongruence_series(p, n), p, a, b, c)
}

/// Every instance with 1 <= a <= a_max and 0 <= b, c < p, sorted by (a, b, c).
pub fn supercongruence_sweep(p: Prime, a_max: u64) -> Result<Vec<SupercongInstance>> {
    let q = p.get();
    let h = supercongruence_series(p, (q * q * a_max + q * (q - 1) + q - 1) as usize);
    let mut out = vec![];
    for a in 1..=a_max {
        for b in 0..q {
            for c in 0..q {
                out.push(supercongruence_check_with(&h, p, a, b, c)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn examples() {
        let i = supercongruence_check(p(2), 1, 0, 0).unwrap();
        assert_eq!((i.lhs.clone(), i.rhs.clone(), i.modulus.clone()), (10.into(), (-2).into(), 4.into()));
        assert!(i.ok());
        let i = supercongruence_check(p(3), 1, 0, 0).unwrap();
        assert_eq!((i.lhs.clone(), i.rhs.clone(), i.modulus.clone()), (5769.into(), (-9).into(), 27.into()));
        assert!(i.ok());
    }

    #[test]
    fn direct_sum_oracle() {
        // Coefficient of z^n/n! in exp(z) exp(z^p/p), by convolution.
        for q in [2u64, 3, 5] {
            for n in 0..40u64 {
                let mut expected = BigInt::zero();
                let mut t = 0;
                while q * t <= n {
                    let term = BigInt::from(factorial(n))
                        / (BigInt::from(factorial(n - q * t))
                            * num_traits::pow(BigInt::from(q), t as usize)
                            * BigInt::from(factorial(t)));
                    expected += term;
                    t += 1;
                }
                let h = supercongruence_series(p(q), n as usize);
                assert_eq!(h[n as usize].to_integer(), expected);
            }
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(supercongruence_check(p(3), 0, 0, 0).is_err());
        assert!(supercongruence_check(p(3), 1, 3, 0).is_err());
        assert!(supercongruence_check(p(3), 1, 0, 3).is_err());
    }

    #[test]
    fn small_sweep() {
        let all = supercongruence_sweep(p(5), 3).unwrap();
        assert_eq!(all.len(), 75);
        assert!(all.iter().all(SupercongInstance::ok));
    }
}
