use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use pdiv::apps::normal_count_index_p;
use pdiv::groups::{
    abelian_subgroup_counts, abelian_subgroup_counts_bruteforce, dihedral_subgroup_counts_bruteforce, hom_series,
    named_group_subgroup_counts, GroupSpec, PartitionType,
};
use pdiv::series::log_transform;
use pdiv::Prime;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn index_p_counts_are_zero_or_one_mod_p() {
    let mut groups: Vec<GroupSpec> = vec![];
    for p in [2, 3, 5] {
        for size in 1..=5 {
            groups.extend(PartitionType::all_of_size(prime(p), size).into_iter().map(GroupSpec::Abelian));
        }
    }
    groups.extend((1..=30).map(GroupSpec::Cyclic));
    groups.extend((1..=30).map(GroupSpec::Dihedral));
    for g in &groups {
        let counts = named_group_subgroup_counts(g).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let r = (counts.get(p) % BigInt::from(p)).to_u64().unwrap();
            assert!(r <= 1, "{g}: s_{p} = {} mod {p}", r);
        }
    }
}

#[test]
fn index_p_counts_match_elementary_rank() {
    for (p, max_size) in [(2, 8), (3, 5), (5, 3)] {
        for size in 1..=max_size {
            for t in PartitionType::all_of_size(prime(p), size) {
                let brute = abelian_subgroup_counts_bruteforce(&t).unwrap();
                // Every index-p subgroup of an abelian group is normal.
                assert_eq!(brute.get(p), normal_count_index_p(t.rank() as u32, prime(p)), "{t}");
            }
        }
    }
}

#[test]
fn dihedral_counts_match_enumeration() {
    for m in 1..=40 {
        let formula = named_group_subgroup_counts(&GroupSpec::Dihedral(m)).unwrap();
        assert_eq!(formula, dihedral_subgroup_counts_bruteforce(m).unwrap(), "D[{m}]");
    }
}

#[test]
fn log_of_hom_counts_recovers_subgroup_counts() {
    for spec in ["A[3;2,1]", "D[6]", "C[12]", "A[2;1,1,1]"] {
        let g: GroupSpec = spec.parse().unwrap();
        let order = g.order().unwrap() as usize + 4;
        let s = log_transform(&hom_series(&g, order).unwrap()).unwrap();
        let counts = named_group_subgroup_counts(&g).unwrap();
        for (n, sn) in s.iter() {
            assert_eq!(sn.to_integer(), counts.get(n as u64), "{spec} n={n}");
        }
    }
}

#[test]
fn free_product_subgroup_counts_are_integers() {
    let g: GroupSpec = "C[3]*A[3;1,1]".parse().unwrap();
    let s = log_transform(&hom_series(&g, 60).unwrap()).unwrap();
    assert!(s.iter().all(|(_, v)| v.is_integer() && *v.numer() >= BigInt::zero()));
    // Every transitive action on 3 points lands in A_3 = C_3 since the group is
    // generated by elements of order 3: (3^3 - 1) / 2! index-3 subgroups.
    assert_eq!(s[3].to_integer(), BigInt::from(13));
}

#[test]
fn larger_types_satisfy_symmetry() {
    for (p, parts) in [(2, vec![10, 8, 7, 5]), (2, vec![20, 20]), (7, vec![13, 4, 2, 1]), (3, vec![9, 9, 9, 9])] {
        let t = PartitionType::new(prime(p), parts).unwrap();
        let c = abelian_subgroup_counts(&t).unwrap();
        let size = t.size();
        for i in 0..=size {
            assert_eq!(c.get(p.pow(i)), c.get(p.pow(size - i)), "{t} i={i}");
        }
    }
}
