//! Acceptance gate: one PASS/FAIL line per criterion, exact arithmetic only.
//!
//! Criteria listed in `KNOWN_FALSE` test statements whose printed form has
//! concrete counterexamples; they are run in full, reported as FAIL, and the
//! gate checks that they keep failing.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use pdiv::apps::{
    periodicity_detect, permutation_count_bruteforce, permutation_counts, subgroup_residues, subsets_of_range,
    supercongruence_sweep, verify_permutation_divisibility, CycleCutoff, CycleRule,
};
use pdiv::arith::{residue_mod_p, vp_u64};
use pdiv::bounds::{
    floor_lemma_checks, q_sequence, rational_grid, verify_bounds, verify_q_recurrence, Bound, BoundKind,
};
use pdiv::groups::{
    abelian_subgroup_counts, abelian_subgroup_counts_bruteforce, classify_abelian_case, difference_valuation_profile,
    hom_series, GroupSpec, PartitionType,
};
use pdiv::series::{check_hypotheses, exp_transform, log_transform, ExpSeries, LogSeries, Theorem};
use pdiv::{vp, Prime, Rat, Valuation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FALSE: &[usize] = &[4, 5, 6, 10, 11];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, checked: usize) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: format!("{checked} checks") }
    } else {
        let shown: Vec<&String> = failures.iter().take(6).collect();
        Outcome { pass: false, detail: format!("{} of {checked} checks failed: {shown:?}", failures.len()) }
    }
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn c_p(p: u64, order: usize) -> LogSeries {
    let one = BigInt::one();
    LogSeries::from_sparse(order, [(1, &one), (p as usize, &one)])
}

fn abelian(p: u64, parts: &[u32]) -> PartitionType {
    PartitionType::new(prime(p), parts.to_vec()).unwrap()
}

/// Random integer series with s_j = s_{j/p} mod p^{v_p(j)} for j <= gap_end,
/// which makes v_p(g_j) >= 1 there.
fn repaired_series(rng: &mut ChaCha8Rng, p: u64, order: usize, gap_end: usize) -> LogSeries {
    let range = (p * p) as i64;
    let mut s: Vec<i64> = (0..order).map(|_| rng.gen_range(-range..=range)).collect();
    for j in 1..=gap_end.min(order) {
        let e = vp_u64(j as u64, prime(p));
        if e > 0 {
            let unit = (p as i64).pow(e);
            s[j - 1] = s[j / p as usize - 1] + unit * rng.gen_range(-2..=2);
        }
    }
    LogSeries::from_integers(&s)
}

fn bound_failures(label: &str, h: &ExpSeries, bound: &Bound, n_max: usize, failures: &mut Vec<String>) {
    let v = verify_bounds(h, bound, 0..=n_max).unwrap();
    if let Some(n) = v.summary.violations.first() {
        failures.push(format!("{label}: {bound} violated at n = {n}"));
    }
}

fn criterion_1() -> Outcome {
    let h = exp_transform(&c_p(2, 2000));
    let bound = Bound::new(prime(2), BoundKind::Involutions).unwrap();
    let v = verify_bounds(&h, &bound, 0..=2000).unwrap();
    let mut failures: Vec<String> = v.summary.violations.iter().map(|n| format!("bound at {n}")).collect();
    for n in (3..=2000).step_by(4) {
        if vp(&h[n], prime(2)) != Valuation::Finite((n as i64 + 5) / 4) {
            failures.push(format!("equality at {n}"));
        }
    }
    outcome(failures, 2001 + 500)
}

fn criterion_2() -> Outcome {
    let mut failures = vec![];
    for p in [2, 3, 5, 7] {
        let s = c_p(p, 1000);
        let h = exp_transform(&s);
        let bound = Bound::new(prime(p), BoundKind::IntegralGap { l: 2 }).unwrap();
        let v = verify_bounds(&h, &bound, 0..=1000).unwrap();
        failures.extend(v.summary.violations.iter().map(|n| format!("p={p} bound at {n}")));
        for row in v.rows.iter().filter(|r| r.n as u64 % (p * p) == 0 && !r.tight) {
            failures.push(format!("p={p} not tight at {}", row.n));
        }
    }
    outcome(failures, 4 * 1001)
}

fn criterion_3() -> Outcome {
    let mut failures = vec![];
    for (big, small) in [(2, 1), (3, 1), (2, 0)] {
        for p in [2, 3] {
            let parts: Vec<u32> = [big, small].into_iter().filter(|&a| a > 0).collect();
            let h = hom_series(&GroupSpec::Abelian(abelian(p, &parts)), 512).unwrap();
            let bound = Bound::new(prime(p), BoundKind::RankTwo { big, small }).unwrap();
            bound_failures(&format!("({big},{small}) p={p}"), &h, &bound, 512, &mut failures);
        }
    }
    outcome(failures, 6 * 513)
}

fn criterion_4() -> Outcome {
    let mut failures = vec![];
    let mut checked = 0;
    for p in [2, 3, 5] {
        for size in 1..=5 {
            for t in PartitionType::all_of_size(prime(p), size) {
                let s = abelian_subgroup_counts(&t).unwrap().to_log_series(512);
                let h = exp_transform(&s);
                let c = classify_abelian_case(&t);
                let kind = if c.dyadic_exception { BoundKind::AbelianDyadic(t.clone()) } else { BoundKind::Abelian(t.clone()) };
                let bound = Bound::new(prime(p), kind).unwrap();
                let v = verify_bounds(&h, &bound, 0..=512).unwrap();
                checked += 1;
                if !v.summary.violations.is_empty() {
                    failures.push(format!("{t}: violations {:?}", &v.summary.violations[..1]));
                    continue;
                }
                let claims = bound.tightness_claims(&s).unwrap();
                let missed = v.claim_failures(&claims);
                if !missed.is_empty() {
                    failures.push(format!("{t}: tightness fails at {:?}", &missed[..1]));
                }
                let q = q_sequence(&h, &bound).unwrap();
                let rec = verify_q_recurrence(&q, &bound, &s).unwrap();
                if !rec.holds() {
                    failures.push(format!("{t}: quotient congruence fails at {:?}", &rec.failures[..1]));
                }
            }
        }
    }
    outcome(failures, checked)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut failures = vec![];
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        for l in 1..=3u32 {
            let pl = prime(p).pow_sat(l) as usize;
            let mut statements = vec![];
            match (p, l) {
                (2, _) => statements.push((Theorem::DyadicGap, pl)),
                (3, 1) => statements.push((Theorem::TernaryGap, 3)),
                _ => {
                    statements.push((Theorem::GapThrough, pl));
                    statements.push((Theorem::DoubleGap, 2 * pl - 1));
                }
            }
            for (theorem, gap_end) in statements {
                let bound = Bound::for_theorem(theorem, prime(p), l, 0).unwrap();
                for trial in 0..20 {
                    let s = repaired_series(&mut rng, p, 400, gap_end);
                    let report = check_hypotheses(&s, prime(p), theorem, l, 0).unwrap();
                    checked += 1;
                    if !report.passed() {
                        failures.push(format!("{theorem} p={p} l={l} #{trial}: construction misses hypotheses"));
                        continue;
                    }
                    bound_failures(&format!("{theorem} p={p} l={l} #{trial}"), &exp_transform(&s), &bound, 400, &mut failures);
                }
            }
        }
    }
    // Witness z + z^2/2 + z^4/4: v_2(h_{8m}) = 4m.
    let one = BigInt::one();
    let h = exp_transform(&LogSeries::from_sparse(160, [(1, &one), (2, &one), (4, &one)]));
    for m in 1..=20 {
        checked += 1;
        if vp(&h[8 * m], prime(2)) != Valuation::Finite(4 * m as i64) {
            failures.push(format!("witness at n = {}", 8 * m));
        }
    }
    outcome(failures, checked)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut failures = vec![];
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        let pu = p as usize;
        for trial in 0..20 {
            let mut data: Vec<i64> = (0..50 * pu).map(|_| rng.gen_range(-20..=20)).collect();
            let shift = rng.gen_range(1..p as i64);
            data[pu - 1] = data[0] - shift + p as i64 * rng.gen_range(-3..=3);
            let s = LogSeries::from_integers(&data);
            let h = exp_transform(&s);
            let base = (data[0] - data[pu - 1]).rem_euclid(p as i64) as u64;
            let mut expected = 1u64;
            for a in 1..=50 {
                expected = expected * base % p;
                checked += 1;
                if residue_mod_p(&h[a * pu], prime(p)) != Some(expected) {
                    failures.push(format!("p={p} #{trial}: h_{} mod p", a * pu));
                }
            }
        }
        let bound = Bound::new(prime(p), BoundKind::DividingLine).unwrap();
        for trial in 0..20 {
            let mut data: Vec<i64> = (0..400).map(|_| rng.gen_range(-20..=20)).collect();
            data[pu - 1] = data[0] + p as i64 * rng.gen_range(-3..=3);
            let s = LogSeries::from_integers(&data);
            checked += 1;
            let report = check_hypotheses(&s, prime(p), Theorem::DividingLine, 0, 0).unwrap();
            if !report.passed() {
                failures.push(format!("p={p} #{trial}: construction misses hypotheses"));
                continue;
            }
            bound_failures(&format!("p={p} #{trial}"), &exp_transform(&s), &bound, 400, &mut failures);
        }
    }
    outcome(failures, checked)
}

fn criterion_7() -> Outcome {
    let mut failures = vec![];
    let mut checked = 0;
    for p in [2, 3, 5, 7] {
        for inst in supercongruence_sweep(prime(p), 6).unwrap() {
            checked += 1;
            if !inst.ok() {
                failures.push(format!("(p,a,b,c) = ({},{},{},{})", inst.p, inst.a, inst.b, inst.c));
            }
        }
    }
    outcome(failures, checked)
}

fn criterion_8() -> Outcome {
    let mut failures = vec![];
    let mut checked = 0;
    for m in [3u64, 4, 5, 6, 8, 12] {
        let h = hom_series(&GroupSpec::Dihedral(m), 512).unwrap();
        let bound = Bound::new(prime(2), BoundKind::Dihedral { m }).unwrap();
        checked += 1;
        bound_failures(&format!("D[{m}]"), &h, &bound, 512, &mut failures);
        for p in [3, 5] {
            checked += 1;
            if !(0..=200).any(|n| vp(&h[n], prime(p)) == Valuation::Finite(0)) {
                failures.push(format!("D[{m}]: every h_n divisible by {p}"));
            }
        }
    }
    outcome(failures, checked)
}

fn criterion_9() -> Outcome {
    let mut failures = vec![];
    let cases = [
        ("C[3]*A[3;1,1]", 3),
        ("C[3]*C[3]*C[3]", 3),
        ("A[2;1,1]*A[2;1,1]", 2),
        ("C[2]*C[16]", 2),
        ("C[2]*C[2]*C[4]", 2),
        ("C[2]*C[2]*C[2]*C[2]", 2),
    ];
    for (spec, p) in cases {
        let g: GroupSpec = spec.parse().unwrap();
        let r = subgroup_residues(&g, 400, prime(p)).unwrap();
        let found = periodicity_detect(&r, 3);
        if !found.detected() {
            failures.push(format!("{spec}: unresolved"));
            continue;
        }
        let doubled = periodicity_detect(&r, 6);
        if (doubled.preperiod, doubled.period) != (found.preperiod, found.period) {
            failures.push(format!("{spec}: not reconfirmed over a doubled window"));
        }
        if spec == "C[2]*C[2]*C[2]*C[2]" && r.iter().any(|&x| x != 1) {
            failures.push(format!("{spec}: an even s_n"));
        }
    }
    outcome(failures, cases.len())
}

fn criterion_10() -> Outcome {
    let mut failures = vec![];
    let mut checked = 0;
    for allowed in subsets_of_range(8) {
        let counts = permutation_counts(8, &allowed);
        for (n, count) in counts.iter().enumerate() {
            checked += 1;
            if *count != BigInt::from(permutation_count_bruteforce(n, &allowed).unwrap()) {
                failures.push(format!("n={n} L={allowed:?}"));
            }
        }
    }
    let pool = [1u64, 2, 3, 5];
    for cutoff in [CycleCutoff::Below, CycleCutoff::Through, CycleCutoff::BelowDouble] {
        for p in [2, 3, 5] {
            for l in 1..=3 {
                if cutoff == CycleCutoff::BelowDouble && (p == 2 || (p, l) == (3, 1)) {
                    continue;
                }
                for mask in 0..16u32 {
                    let a: BTreeSet<u64> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
                    let rule = CycleRule::new(cutoff, prime(p), l, a).unwrap();
                    let report = verify_permutation_divisibility(&rule, 300).unwrap();
                    checked += 1;
                    if !report.passed() {
                        failures.push(format!("{rule}: fails at n = {}", report.violations[0]));
                    }
                }
            }
        }
    }
    outcome(failures, checked)
}

fn criterion_11() -> Outcome {
    let mut failures = vec![];
    let mut checked = 0;
    let grid = rational_grid(6, -3, 3);
    for p in [2, 3, 5] {
        for l in 1..=3 {
            let r = floor_lemma_checks(prime(p), l, 200, 50, -100..=100, &grid);
            checked += r.scaling_checked + r.halving_checked;
            for (i, j) in r.scaling_counterexamples.iter().take(2) {
                failures.push(format!("scaling p={p} l={l} (i,j)=({i},{j})"));
            }
            if !r.halving_counterexamples.is_empty() {
                let js: BTreeSet<i64> = r.halving_counterexamples.iter().map(|(j, _)| *j).collect();
                failures.push(format!(
                    "halving: {} of {} pairs fail, j in {:?}..={:?}",
                    r.halving_counterexamples.len(),
                    r.halving_checked,
                    js.first().unwrap(),
                    js.last().unwrap()
                ));
            }
        }
    }
    // exp/log round trip on random rational series.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    for trial in 0..20 {
        let s = LogSeries::from_fn(40, |_| Rat::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=6).into()));
        checked += 1;
        if log_transform(&exp_transform(&s)).unwrap() != s {
            failures.push(format!("round trip #{trial}"));
        }
    }
    for (p, max_size) in [(2, 8), (3, 5), (5, 3)] {
        for size in 1..=max_size {
            for t in PartitionType::all_of_size(prime(p), size) {
                checked += 1;
                if abelian_subgroup_counts(&t).unwrap() != abelian_subgroup_counts_bruteforce(&t).unwrap() {
                    failures.push(format!("oracle {t}"));
                }
            }
        }
    }
    for p in [2u64, 3, 5] {
        let (p1, p2) = (BigInt::from(p), BigInt::from(p * p));
        for size in 1..=6 {
            for t in PartitionType::all_of_size(prime(p), size) {
                let c = abelian_subgroup_counts(&t).unwrap();
                for i in 0..=size {
                    let si = c.get(p.pow(i));
                    checked += 1;
                    if (&si % &p1) != BigInt::one() {
                        failures.push(format!("congruence to 1 mod p: {t} i={i}"));
                    }
                    if p > 2 && t.rank() > 1 && (1..size).contains(&i) && (&si % &p2) != BigInt::one() + &p1 {
                        failures.push(format!("congruence to 1 + p mod p^2: {t} i={i}"));
                    }
                }
                let profile = difference_valuation_profile(&c, &t);
                checked += profile.checked;
                failures.extend(profile.failures.into_iter().map(|f| format!("{t}: {f}")));
            }
        }
    }
    outcome(failures, checked)
}

#[test]
fn acceptance() {
    let criteria: [(usize, &str, fn() -> Outcome); 11] = [
        (1, "involution bound and equality at n = 3 mod 4", criterion_1),
        (2, "cyclic groups of prime order", criterion_2),
        (3, "rank-two abelian bound", criterion_3),
        (4, "abelian p-groups: bounds, tightness, quotient congruences", criterion_4),
        (5, "gap-based bounds on repaired random series", criterion_5),
        (6, "dividing line between s_1 = s_p and s_1 != s_p", criterion_6),
        (7, "supercongruence sweep", criterion_7),
        (8, "dihedral groups", criterion_8),
        (9, "eventual periodicity of s_n mod p", criterion_9),
        (10, "restricted-cycle permutations", criterion_10),
        (11, "floor lemmas, round trip, oracles, structure of abelian counts", criterion_11),
    ];
    let mut unexpected = vec![];
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {id:>2}: {name} [{:.1}s] {}", start.elapsed().as_secs_f64(), out.detail);
        if out.pass == KNOWN_FALSE.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with an unexpected outcome: {unexpected:?}");
}
