//! Difference bases of finite groups.
//!
//! A subset `B` of a group `G` is a difference basis for `A ⊆ G` when every
//! `a ∈ A` equals `x y⁻¹` for some `x, y ∈ B`. The crate computes minimum
//! sizes `Δ[G]` with an exact branch-and-bound search, builds explicit bases
//! from Galois-ring algebra, evaluates closed-form bounds, and checks every
//! claimed basis with an independent certificate checker.

pub mod arith;
pub mod bounds;
pub mod certify;
pub mod constructions;
pub mod data;
pub mod error;
pub mod galois;
pub mod group;
pub mod interval;
pub mod oracle;
pub mod solver;
pub mod table;

pub use bounds::{best_bounds, lower_bound, BoundRecord, Effort};
pub use certify::{check_certificate, Certificate, CoverageReport, IntervalCertificate, SubsetTag, Target};
pub use error::{Error, Result};
pub use galois::{GaloisRingSpec, RingElement};
pub use group::{parse_group_spec, GroupElement, GroupKind, GroupSpec, Homomorphism};
pub use oracle::brute_force_delta;
pub use solver::{min_difference_basis, OptimalResult, SearchConfig, SearchStatus, SymmetryLevel};
pub use table::{solve_table, Family, TableRow};
