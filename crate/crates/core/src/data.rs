//! Bundled data: optimal cyclic bases, minimum interval bases and small non-abelian groups.
//!
//! The cyclic and interval bases were produced by this crate's own solver
//! (`cargo run --release -p diffbase --example regenerate_data`).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::group::GroupSpec;

pub const BUNDLED_CYCLIC_MAX: u64 = 100;
pub const BUNDLED_INTERVAL_MAX: u64 = 40;

const CYCLIC_JSON: &str = include_str!("../data/cyclic_bases.json");
const INTERVAL_JSON: &str = include_str!("../data/interval_bases.json");
const NONABELIAN_JSON: &str = include_str!("../data/nonabelian.json");

fn parse_table<T: serde::de::DeserializeOwned>(text: &str) -> BTreeMap<u64, Vec<T>> {
    let raw: BTreeMap<String, Vec<T>> = serde_json::from_str(text).expect("bundled data parses");
    raw.into_iter()
        .map(|(k, v)| (k.parse().expect("numeric key"), v))
        .collect()
}

fn cyclic_table() -> &'static BTreeMap<u64, Vec<u64>> {
    static T: OnceLock<BTreeMap<u64, Vec<u64>>> = OnceLock::new();
    T.get_or_init(|| parse_table(CYCLIC_JSON))
}

fn interval_table() -> &'static BTreeMap<u64, Vec<i64>> {
    static T: OnceLock<BTreeMap<u64, Vec<i64>>> = OnceLock::new();
    T.get_or_init(|| parse_table(INTERVAL_JSON))
}

/// An optimal difference basis of `C_n` as residues, if bundled.
pub fn cyclic_basis(n: u64) -> Option<&'static [u64]> {
    cyclic_table().get(&n).map(|v| v.as_slice())
}

/// `Δ[C_n]` from the bundled bases.
pub fn cyclic_delta(n: u64) -> Option<u64> {
    cyclic_basis(n).map(|b| b.len() as u64)
}

/// A minimum set of integers whose differences cover `[1, n]`, if bundled.
pub fn interval_basis(n: u64) -> Option<Vec<i64>> {
    interval_table().get(&n).cloned()
}

/// The bundled non-abelian groups as `(name, group)`, ordered by order then name.
pub fn nonabelian_fixtures() -> &'static [(String, GroupSpec)] {
    static T: OnceLock<Vec<(String, GroupSpec)>> = OnceLock::new();
    T.get_or_init(|| {
        let raw: BTreeMap<String, GroupSpec> =
            serde_json::from_str(NONABELIAN_JSON).expect("bundled fixtures parse");
        let mut v: Vec<(String, GroupSpec)> = raw.into_iter().collect();
        v.sort_by(|a, b| (a.1.order(), &a.0).cmp(&(b.1.order(), &b.0)));
        v
    })
}

/// Looks up a bundled non-abelian group by name, e.g. `Q8` or `C3:C4`.
pub fn nonabelian_fixture(name: &str) -> Option<&'static GroupSpec> {
    nonabelian_fixtures()
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, g)| g)
}
