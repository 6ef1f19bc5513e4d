//! Published tables as fixtures, checked without long searches.

mod common;

use diffbase::bounds::{best_bounds, lower_bound, Effort};
use diffbase::certify::check_certificate;
use diffbase::constructions::cyclic_certificate;
use diffbase::table::{paper_style, table_groups, Family};
use diffbase::{data, parse_group_spec, GroupSpec};

use common::{verified, CONFLICTS, CYCLIC, NONCYCLIC, SMALL_GROUPS};

#[test]
fn lb_column() {
    for (name, lb, delta) in NONCYCLIC {
        let g = parse_group_spec(name).unwrap();
        assert_eq!(lower_bound(&g), lb, "{name}");
        assert!(lb <= delta);
    }
}

#[test]
fn fixture_list_is_every_noncyclic_abelian_group() {
    let mut listed: Vec<GroupSpec> = NONCYCLIC
        .iter()
        .map(|(n, _, _)| parse_group_spec(n).unwrap().canonical().unwrap())
        .collect();
    let mut all: Vec<GroupSpec> = table_groups(Family::NoncyclicAbelian, 12, 95)
        .into_iter()
        .map(|(_, g)| g.canonical().unwrap())
        .collect();
    listed.sort_by_key(|g| g.descriptor());
    all.sort_by_key(|g| g.descriptor());
    assert_eq!(listed, all);
}

#[test]
fn small_groups_bracket() {
    for (name, published) in SMALL_GROUPS {
        let delta = verified(name, published);
        let g = data::nonabelian_fixture(name).cloned().unwrap_or_else(|| parse_group_spec(name).unwrap());
        let b = best_bounds(&g, Effort::WithConstructions);
        assert!(b.lower <= delta && delta <= b.upper, "{name}: [{}, {}]", b.lower, b.upper);
    }
}

#[test]
fn bundled_cyclic_data() {
    for n in 1..=100u64 {
        let want = verified(&format!("C{n}"), CYCLIC[n as usize - 1]);
        let got = data::cyclic_delta(n).unwrap();
        assert_eq!(got, want, "C{n}");
        let c = cyclic_certificate(n).unwrap();
        assert_eq!(c.size() as u64, got);
        assert!(check_certificate(&c).unwrap().valid);
    }
}

#[test]
fn characteristic_column_style() {
    let cases = [
        (26, "1,1766..."),
        (16, "1,25"),
        (64, "1,125"),
        (91, "1,0482..."),
        (73, "1,0533..."),
        (100, "1,2"),
        (2, "1,4142..."),
    ];
    for (n, text) in cases {
        let d = CYCLIC[n as usize - 1] as f64;
        assert_eq!(paper_style(d / (n as f64).sqrt()), text, "C{n}");
    }
    assert_eq!(paper_style(14.0 / 8.0), "1,75");
    assert_eq!(paper_style(9.0 / 52f64.sqrt()), "1,2480...");
}

#[test]
fn bracket_closes_on_cyclic_groups_with_bundled_data() {
    for n in 1..=100 {
        let b = best_bounds(&GroupSpec::cyclic(n), Effort::WithSolver);
        assert!(b.is_closed(), "C{n}: [{}, {}]", b.lower, b.upper);
    }
}

#[test]
fn conflicts_are_real() {
    // D10 has five involutions, so the counting bound already excludes 4
    let d10 = data::nonabelian_fixture("D10").unwrap();
    assert_eq!(lower_bound(d10), 5);
    for (name, published, fixed) in CONFLICTS {
        let g = data::nonabelian_fixture(name).cloned().unwrap_or_else(|| parse_group_spec(name).unwrap());
        let b = best_bounds(&g, Effort::WithConstructions);
        assert!(b.lower <= fixed && fixed <= b.upper, "{name}: [{}, {}]", b.lower, b.upper);
        assert_ne!(published, fixed);
    }
}
