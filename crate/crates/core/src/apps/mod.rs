//! Permutations with restricted cycle lengths, a binomial-type
//! supercongruence, eventual periodicity of s_n mod p, and index-p normal
//! subgroup counts.

mod periodicity;
mod permutations;
mod supercongruence;

use num_bigint::BigInt;

use crate::arith::{residue_mod_p, Prime};
use crate::error::{Error, Result};
use crate::groups::{hom_series, GroupSpec};
use crate::series::log_transform;

pub use periodicity::{periodicity_detect, PeriodResult, PeriodStatus};
pub use permutations::{
    permutation_count, permutation_count_bruteforce, permutation_counts, subsets_of_range,
    verify_permutation_divisibility, CycleCutoff, CycleRule, PermutationReport, PermutationRow,
};
pub use supercongruence::{
    supercongruence_check, supercongruence_check_with, supercongruence_series, supercongruence_sweep,
    SupercongInstance,
};

/// (p^k - 1)/(p - 1): index-p normal subgroups of a group whose maximal
/// elementary abelian p-quotient has rank k.
pub fn normal_count_index_p(k: u32, p: Prime) -> BigInt {
    (num_traits::pow(BigInt::from(p.get()), k as usize) - 1) / (p.get() - 1)
}

/// s_1(G), ..., s_N(G) mod p, recovered from the homomorphism counts.
pub fn subgroup_residues(g: &GroupSpec, order: usize, p: Prime) -> Result<Vec<u64>> {
    let s = log_transform(&hom_series(g, order)?)?;
    s.iter().map(|(n, sn)| residue_mod_p(sn, p).ok_or(Error::NotIntegral(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn normal_counts() {
        let p = |n| Prime::new(n).unwrap();
        assert_eq!(normal_count_index_p(2, p(3)), BigInt::from(4));
        assert_eq!(normal_count_index_p(0, p(7)), BigInt::zero());
        assert_eq!(normal_count_index_p(1, p(5)), BigInt::one());
    }

    #[test]
    fn residues_of_free_product() {
        let g: GroupSpec = "C[2]*C[2]".parse().unwrap();
        // C_2 * C_2 is the infinite dihedral group: s_n = n for odd n, n + 1 for even n.
        let r = subgroup_residues(&g, 12, Prime::new(5).unwrap()).unwrap();
        let expected: Vec<u64> = (1..=12u64).map(|n| (n + (n % 2 == 0) as u64) % 5).collect();
        assert_eq!(r, expected);
    }
}
