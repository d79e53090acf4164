//! Enumeration oracles for small groups. Test and cross-check use only.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::{PartitionType, SubgroupCounts};

const MAX_ABELIAN_ORDER: u64 = 256;
const MAX_DIHEDRAL_M: u64 = 64;

type Bits = Vec<u64>;

fn bits(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn has(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn count(b: &Bits) -> u64 {
    b.iter().map(|w| w.count_ones() as u64).sum()
}

fn tally(subgroups: impl IntoIterator<Item = u64>, order: u64) -> SubgroupCounts {
    let mut map = BTreeMap::new();
    for size in subgroups {
        *map.entry(order / size).or_insert_with(BigInt::default) += 1;
    }
    SubgroupCounts::from_map(map)
}

/// Enumerates every subgroup of C_{p^a_1} x ... x C_{p^a_r} (order at most 256).
///
/// Subgroups of order p^(k+1) are found as H + <g> for H of order p^k and
/// g outside H with p g in H; every subgroup arises this way because each
/// has a subgroup of index p.
pub fn abelian_subgroup_counts_bruteforce(t: &PartitionType) -> Result<SubgroupCounts> {
    let p = t.prime().get();
    let order = t
        .prime()
        .checked_pow(t.size())
        .filter(|&o| o <= MAX_ABELIAN_ORDER)
        .ok_or_else(|| Error::CapExceeded(format!("|{t}| exceeds {MAX_ABELIAN_ORDER}")))?;
    let n = order as usize;
    let moduli: Vec<usize> = t.parts().iter().map(|&a| p.pow(a) as usize).collect();
    let digits = |mut x: usize| -> Vec<usize> {
        moduli
            .iter()
            .map(|&m| {
                let d = x % m;
                x /= m;
                d
            })
            .collect()
    };
    let encode = |ds: &[usize]| ds.iter().zip(&moduli).rev().fold(0, |acc, (&d, &m)| acc * m + d);
    let all: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let add = |x: usize, y: usize| -> usize {
        let sum: Vec<usize> = all[x].iter().zip(&all[y]).zip(&moduli).map(|((a, b), m)| (a + b) % m).collect();
        encode(&sum)
    };
    let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| add(x, y)).collect()).collect();
    let times = |g: usize, k: u64| (0..k).fold(0, |acc, _| table[acc][g]);

    let mut trivial = bits(n);
    set(&mut trivial, 0);
    let mut layer = vec![trivial];
    let mut sizes = vec![1u64];
    while !layer.is_empty() {
        let mut next: HashSet<Bits> = HashSet::new();
        for h in &layer {
            let members: Vec<usize> = (0..n).filter(|&x| has(h, x)).collect();
            let mut covered = h.clone();
            for g in 0..n {
                if has(&covered, g) || !has(h, times(g, p)) {
                    continue;
                }
                let mut k = bits(n);
                let mut shift = 0;
                for _ in 0..p {
                    for &x in &members {
                        set(&mut k, table[x][shift]);
                    }
                    shift = table[shift][g];
                }
                for (c, w) in covered.iter_mut().zip(&k) {
                    *c |= w;
                }
                next.insert(k);
            }
        }
        layer = next.into_iter().collect();
        sizes.extend(layer.iter().map(count));
    }
    Ok(tally(sizes, order))
}

/// Enumerates every subgroup of the dihedral group of order 2m (m <= 64).
///
/// Elements are pairs (k, e) meaning r^k s^e, with
/// (k1, e1)(k2, e2) = (k1 + (-1)^e1 k2, e1 xor e2). Every subgroup is
/// generated by at most two elements.
pub fn dihedral_subgroup_counts_bruteforce(m: u64) -> Result<SubgroupCounts> {
    if m == 0 || m > MAX_DIHEDRAL_M {
        return Err(Error::CapExceeded(format!("dihedral enumeration needs 1 <= m <= {MAX_DIHEDRAL_M}")));
    }
    let mu = m as usize;
    let n = 2 * mu;
    let mul = |x: usize, y: usize| -> usize {
        let (k1, e1) = (x % mu, x / mu);
        let (k2, e2) = (y % mu, y / mu);
        let k = if e1 == 0 { (k1 + k2) % mu } else { (k1 + mu - k2) % mu };
        k + mu * (e1 ^ e2)
    };
    let closure = |gens: &[usize]| -> Bits {
        let mut b = bits(n);
        let mut stack = vec![0];
        set(&mut b, 0);
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = mul(x, g);
                if !has(&b, y) {
                    set(&mut b, y);
                    stack.push(y);
                }
            }
        }
        b
    };
    let mut seen: HashSet<Bits> = HashSet::new();
    for a in 0..n {
        for b in a..n {
            seen.insert(closure(&[a, b]));
        }
    }
    Ok(tally(seen.iter().map(count), 2 * m))
}
