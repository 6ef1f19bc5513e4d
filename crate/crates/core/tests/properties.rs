use std::collections::HashSet;

use proptest::prelude::*;

use diffbase::bounds::{best_bounds, lower_bound, Effort};
use diffbase::certify::{check_certificate, check_interval, Certificate, Target};
use diffbase::constructions::{cyclic_from_interval, recursive_p_basis};
use diffbase::group::{count_involutions, order_census, GroupElement, GroupSpec};
use diffbase::interval::interval_basis;
use diffbase::{brute_force_delta, min_difference_basis, SearchConfig, SymmetryLevel};

/// Smallest integer set whose differences cover `[1, n]`, by depth-first
/// search over gap sequences. Gaps larger than `n` contribute nothing and can
/// be shrunk to `n`, so gaps range over `1..=n`.
fn interval_oracle(n: u64) -> u64 {
    fn extend(set: &mut Vec<u64>, k: usize, n: u64, covered: u64, full: u64) -> bool {
        if covered == full {
            return true;
        }
        let left = k - set.len();
        let missing = u64::from((full & !covered).count_ones());
        let reachable = (left * set.len() + left * left.saturating_sub(1) / 2) as u64;
        if left == 0 || reachable < missing {
            return false;
        }
        let last = *set.last().unwrap();
        for gap in 1..=n {
            let x = last + gap;
            let mut c = covered;
            for &y in set.iter() {
                if x - y <= n {
                    c |= 1 << (x - y);
                }
            }
            set.push(x);
            if extend(set, k, n, c, full) {
                return true;
            }
            set.pop();
        }
        false
    }
    let full = ((1u64 << (n + 1)) - 1) & !1;
    (1..).find(|&k| extend(&mut vec![0], k as usize, n, 0, full)).unwrap()
}

fn abelian(max_order: u64) -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), 1..5)
        .prop_filter("order", move |f| f.iter().product::<u64>() <= max_order)
        .prop_map(|f| GroupSpec::abelian(f).unwrap())
}

fn p_group(max_order: u64) -> impl Strategy<Value = GroupSpec> {
    (prop::sample::select(vec![2u64, 3, 5]), prop::collection::vec(1u32..4, 1..5))
        .prop_filter("order", move |(p, e)| e.iter().map(|&k| p.pow(k)).product::<u64>() <= max_order)
        .prop_map(|(p, e)| GroupSpec::abelian(e.iter().map(|&k| p.pow(k)).collect()).unwrap())
}

fn covers(g: &GroupSpec, basis: &[GroupElement]) -> bool {
    let diffs: HashSet<usize> = basis
        .iter()
        .flat_map(|a| basis.iter().map(move |b| g.key(&g.diff(a, b))))
        .collect();
    diffs.len() as u64 == g.order()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn census_counts_every_element(g in abelian(512)) {
        let census = order_census(&g);
        prop_assert_eq!(census.values().sum::<u64>(), g.order());
        let even = g.factors().unwrap().iter().filter(|&&n| n % 2 == 0).count() as u32;
        prop_assert_eq!(count_involutions(&g), (1u64 << even) - 1);
        let brute = g.elements().filter(|x| *x != g.identity() && g.op(x, x) == g.identity()).count() as u64;
        prop_assert_eq!(brute, count_involutions(&g));
    }

    #[test]
    fn checker_agrees_with_direct_count(g in abelian(60), picks in prop::collection::vec(any::<u64>(), 1..12)) {
        let basis: Vec<GroupElement> = picks.iter().map(|&k| g.element((k % g.order()) as usize)).collect();
        let c = Certificate::new(g.clone(), Target::Full, basis.clone(), "random");
        prop_assert_eq!(check_certificate(&c).unwrap().valid, covers(&g, &basis));
    }

    #[test]
    fn translates_of_a_basis_are_bases(g in abelian(48), shift in any::<u64>()) {
        let r = min_difference_basis(&g, &Target::Full, &SearchConfig::default()).unwrap();
        let t = g.element((shift % g.order()) as usize);
        let moved: Vec<GroupElement> = r.certificate.basis.iter().map(|x| g.op(x, &t)).collect();
        prop_assert!(covers(&g, &moved));
    }

    #[test]
    fn certificate_json_round_trip(g in abelian(100), picks in prop::collection::vec(any::<u64>(), 0..8)) {
        let basis = picks.iter().map(|&k| g.element((k % g.order()) as usize)).collect();
        let c = Certificate::new(g, Target::Full, basis, "random");
        let back: Certificate = serde_json::from_str(&c.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetry_levels_agree_with_oracle(g in abelian(24)) {
        let oracle = brute_force_delta(&g, &Target::Full).unwrap();
        for symmetry in [SymmetryLevel::None, SymmetryLevel::Translation, SymmetryLevel::TranslationNegation, SymmetryLevel::TranslationMultiplier] {
            let cfg = SearchConfig { symmetry, ..SearchConfig::default() };
            let r = min_difference_basis(&g, &Target::Full, &cfg).unwrap();
            prop_assert_eq!(r.delta, oracle);
            prop_assert!(covers(&g, &r.certificate.basis));
        }
    }

    #[test]
    fn sandwich_and_nested_brackets(g in abelian(40)) {
        let d = min_difference_basis(&g, &Target::Full, &SearchConfig::default()).unwrap().delta;
        prop_assert!(lower_bound(&g) <= d);
        let mut prev = (0, u64::MAX);
        for effort in [Effort::FormulasOnly, Effort::WithConstructions, Effort::WithSolver] {
            let b = best_bounds(&g, effort);
            prop_assert!(b.lower <= d && d <= b.upper, "{} {:?}: [{}, {}] vs {}", g.descriptor(), effort, b.lower, b.upper, d);
            prop_assert!(b.lower >= prev.0 && b.upper <= prev.1);
            prev = (b.lower, b.upper);
        }
    }

    #[test]
    fn recursive_bases_are_valid(g in p_group(729)) {
        let c = recursive_p_basis(&g).unwrap();
        prop_assert!(check_certificate(&c).unwrap().valid);
        prop_assert!(c.size() as u64 >= lower_bound(&g));
    }

    #[test]
    fn interval_bases_are_minimal(n in 1u64..=24) {
        let r = interval_basis(n, 60_000).unwrap();
        prop_assert!(check_interval(&r.certificate).is_empty());
        prop_assert!(r.exact);
        prop_assert_eq!(r.delta, interval_oracle(n));
    }

    #[test]
    fn cyclic_from_interval_size(n in 2u64..=49) {
        let c = cyclic_from_interval(n).unwrap();
        prop_assert!(check_certificate(&c).unwrap().valid);
        prop_assert_eq!(c.size() as u64, interval_oracle((n - 1).div_ceil(2)));
    }
}

#[test]
fn interval_oracle_known_values() {
    // Δ[6] = 4 and seven integers reach 18
    assert_eq!(interval_oracle(6), 4);
    assert_eq!(interval_oracle(17), 7);
    assert_eq!(interval_oracle(18), 7);
    assert_eq!(interval_oracle(19), 8);
}
