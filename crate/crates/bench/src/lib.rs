//! Benchmark fixtures.

use diffbase::{parse_group_spec, GroupSpec};

/// Groups whose exact search takes milliseconds to a few seconds.
pub const SOLVER_GROUPS: [&str; 5] = ["C2^4", "C31", "C3^3", "C2xC16", "C6^2"];

/// Galois rings `(p, k, r)` used for the construction benchmarks.
pub const RINGS: [(u64, u32, u32); 3] = [(3, 2, 1), (5, 1, 2), (7, 2, 1)];

pub fn group(name: &str) -> GroupSpec {
    parse_group_spec(name).expect("bench fixture parses")
}
