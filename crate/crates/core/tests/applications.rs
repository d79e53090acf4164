use std::collections::BTreeSet;

use pdiv::apps::{
    periodicity_detect, permutation_counts, subgroup_residues, verify_permutation_divisibility, CycleCutoff, CycleRule,
};
use pdiv::groups::{hom_series, GroupSpec};
use pdiv::Prime;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn prime_power_cycles_count_cyclic_representations() {
    for (p, l) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1), (5, 2)] {
        let allowed: BTreeSet<u64> = (0..=l).map(|s| p.pow(s)).collect();
        let counts = permutation_counts(120, &allowed);
        let h = hom_series(&GroupSpec::Cyclic(p.pow(l)), 120).unwrap();
        for (n, c) in counts.iter().enumerate() {
            assert_eq!(&h[n].to_integer(), c, "C[{}] n={n}", p.pow(l));
        }
    }
}

#[test]
fn detected_periods_survive_a_longer_horizon() {
    for (spec, p) in [("C[2]*C[2]*C[4]", 2), ("C[3]*C[3]*C[3]", 3), ("C[5]*C[5]", 5)] {
        let g: GroupSpec = spec.parse().unwrap();
        let long = subgroup_residues(&g, 480, prime(p)).unwrap();
        let short = periodicity_detect(&long[..240], 3);
        assert!(short.detected(), "{spec}");
        let full = periodicity_detect(&long, 6);
        assert_eq!((full.preperiod, full.period), (short.preperiod, short.period), "{spec}");
    }
}

#[test]
fn permutation_reports_are_sorted_and_complete() {
    let rule = CycleRule::new(CycleCutoff::Through, prime(5), 2, [1, 2].into_iter().collect()).unwrap();
    let report = verify_permutation_divisibility(&rule, 150).unwrap();
    assert_eq!(report.allowed, vec![1, 2, 5, 10, 25]);
    assert!(report.admissible && report.passed());
    assert!(report.rows.iter().enumerate().all(|(i, r)| r.n == i));
    assert_eq!(report.rows.len(), 151);
}
