//! Recomputes `data/cyclic_bases.json` and `data/interval_bases.json`.
//! With the argument `intervals` only the interval bases are recomputed.

use std::collections::BTreeMap;

use diffbase::data::{BUNDLED_CYCLIC_MAX, BUNDLED_INTERVAL_MAX};
use diffbase::group::GroupSpec;
use diffbase::interval::search_interval_basis;
use diffbase::solver::{delta, SearchConfig, SearchStatus};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let mut intervals = BTreeMap::new();
    for n in 1..=BUNDLED_INTERVAL_MAX {
        let (r, exact) = search_interval_basis(n, 3_600_000);
        assert!(exact, "interval search for {n} ran out of time");
        eprintln!("interval {n}: {}", r.len());
        intervals.insert(n.to_string(), r);
    }
    std::fs::write(format!("{dir}/interval_bases.json"), serde_json::to_string(&intervals).unwrap()).unwrap();
    if std::env::args().nth(1).as_deref() == Some("intervals") {
        return;
    }
    let mut bases = BTreeMap::new();
    for n in 1..=BUNDLED_CYCLIC_MAX {
        let r = delta(&GroupSpec::cyclic(n), &SearchConfig::with_budget(3_600_000)).unwrap();
        assert_eq!(r.status, SearchStatus::ProvedOptimal);
        eprintln!("cyclic {n}: {} ({} ms)", r.delta, r.wall_time_ms);
        let b: Vec<u64> = r.certificate.basis.iter().map(|x| x.coords.first().copied().unwrap_or(0)).collect();
        bases.insert(n.to_string(), b);
    }
    std::fs::write(format!("{dir}/cyclic_bases.json"), serde_json::to_string(&bases).unwrap()).unwrap();
}
