//! Certificates: a group, a target subset, and a claimed difference basis,
//! together with the checker that validates them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::GaloisRingSpec;
use crate::group::{GroupElement, GroupKind, GroupSpec};

/// Symbolic subsets defined by a Galois ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubsetTag {
    /// `U(R) × R` inside `R × R` or `R⋆R`: pairs whose first entry is a unit.
    #[serde(rename = "UxR")]
    UnitsTimesRing,
    /// `{(x, y) ∈ R × U(R) : x = (y − 1) z for some unit z}`.
    #[serde(rename = "RUR-A")]
    DiagonalImage,
}

/// The subset a certificate claims to cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Full,
    Elements(Vec<GroupElement>),
    Tag { tag: SubsetTag, ring: GaloisRingSpec },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TargetJson {
    Name(String),
    Elements {
        elements: Vec<GroupElement>,
    },
    Tag {
        tag: SubsetTag,
        ring: GaloisRingSpec,
    },
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Target::Full => TargetJson::Name("full".into()),
            Target::Elements(e) => TargetJson::Elements {
                elements: e.clone(),
            },
            Target::Tag { tag, ring } => TargetJson::Tag {
                tag: *tag,
                ring: ring.clone(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Target {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match TargetJson::deserialize(d)? {
            TargetJson::Name(n) if n == "full" => Ok(Target::Full),
            TargetJson::Name(n) => Err(serde::de::Error::custom(format!("unknown target `{n}`"))),
            TargetJson::Elements { elements } => Ok(Target::Elements(elements)),
            TargetJson::Tag { tag, ring } => Ok(Target::Tag { tag, ring }),
        }
    }
}

impl Target {
    /// The target elements in `group`, sorted by key and deduplicated.
    pub fn resolve(&self, group: &GroupSpec) -> Result<Vec<GroupElement>> {
        let mut out = match self {
            Target::Full => return Ok(group.elements().collect()),
            Target::Elements(e) => {
                for x in e {
                    group.check(x)?;
                }
                e.clone()
            }
            Target::Tag { tag, ring } => resolve_tag(*tag, ring, group)?,
        };
        out.sort_by_key(|x| group.key(x));
        out.dedup();
        Ok(out)
    }
}

fn resolve_tag(tag: SubsetTag, ring: &GaloisRingSpec, group: &GroupSpec) -> Result<Vec<GroupElement>> {
    let r = ring.degree();
    match tag {
        SubsetTag::UnitsTimesRing => {
            let additive = group
                .factors()
                .is_some_and(|f| f.len() == 2 * r && f.iter().all(|&m| m == ring.char_modulus()));
            let star = group.kind() == GroupKind::Star && group.ring() == Some(ring);
            if !(additive || star) {
                return Err(Error::Precondition(format!(
                    "tag UxR does not fit group {}",
                    group.descriptor()
                )));
            }
            Ok(group
                .elements()
                .filter(|x| x.coords[..r].iter().any(|&c| c % ring.p != 0))
                .collect())
        }
        SubsetTag::DiagonalImage => {
            if group.kind() != GroupKind::RingUnits || group.ring() != Some(ring) {
                return Err(Error::Precondition(format!(
                    "tag RUR-A does not fit group {}",
                    group.descriptor()
                )));
            }
            let units: Vec<_> = ring.units().collect();
            let one = ring.one();
            let mut set = BTreeSet::new();
            for y in &units {
                let ym1 = ring.sub(y, &one);
                for z in &units {
                    let mut v = ring.mul(&ym1, z).coeffs;
                    v.extend(&y.coeffs);
                    set.insert(GroupElement::new(v));
                }
            }
            Ok(set.into_iter().collect())
        }
    }
}

/// A claimed difference basis for a target subset of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: GroupSpec,
    pub target: Target,
    pub basis: Vec<GroupElement>,
    pub method: String,
    /// Abelian structure the group is known to be isomorphic to, when the
    /// group itself is given in another form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed: Option<GroupSpec>,
}

impl Certificate {
    pub fn new(group: GroupSpec, target: Target, basis: Vec<GroupElement>, method: impl Into<String>) -> Self {
        Certificate {
            group,
            target,
            basis,
            method: method.into(),
            claimed: None,
        }
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Runs the checker and turns a miss into an error.
    pub fn verify(&self) -> Result<()> {
        let report = check_certificate(self)?;
        if report.valid {
            Ok(())
        } else {
            Err(Error::Uncovered(format!(
                "{} ({}): {} of {} target elements missed",
                self.method,
                self.group.descriptor(),
                report.missed.len(),
                report.target_size
            )))
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Result of checking a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub valid: bool,
    pub missed: Vec<GroupElement>,
    pub target_size: usize,
    pub basis_size: usize,
}

/// Computes `B·B⁻¹` and reports exactly which target elements it misses.
pub fn check_certificate(c: &Certificate) -> Result<CoverageReport> {
    let g = &c.group;
    for b in &c.basis {
        g.check(b)?;
    }
    let target = c.target.resolve(g)?;
    let mut covered = vec![false; g.order() as usize];
    let inverses: Vec<GroupElement> = c.basis.iter().map(|b| g.inverse(b)).collect();
    for a in &c.basis {
        for bi in &inverses {
            covered[g.key(&g.op(a, bi))] = true;
        }
    }
    let missed: Vec<GroupElement> = target
        .iter()
        .filter(|x| !covered[g.key(x)])
        .cloned()
        .collect();
    Ok(CoverageReport {
        valid: missed.is_empty(),
        missed,
        target_size: target.len(),
        basis_size: c.basis.len(),
    })
}

/// Number of ways each element arises as a difference `a·b⁻¹` with `a ≠ b`.
pub fn difference_multiplicities(group: &GroupSpec, basis: &[GroupElement]) -> Vec<u64> {
    let mut mult = vec![0u64; group.order() as usize];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            if i != j {
                mult[group.key(&group.diff(a, b))] += 1;
            }
        }
    }
    mult
}

/// Whether every non-identity element is a difference exactly once.
pub fn is_perfect_difference_set(group: &GroupSpec, basis: &[GroupElement]) -> bool {
    difference_multiplicities(group, basis)
        .iter()
        .skip(1)
        .all(|&m| m == 1)
}

/// The target of an interval certificate: `[1, n]` in the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalTarget {
    pub interval: u64,
}

/// A set of integers whose differences are claimed to cover `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalCertificate {
    /// Always `"Z"`.
    pub group: String,
    pub target: IntervalTarget,
    pub basis: Vec<i64>,
    pub method: String,
}

impl IntervalCertificate {
    pub fn new(n: u64, basis: Vec<i64>, method: impl Into<String>) -> Self {
        IntervalCertificate {
            group: "Z".into(),
            target: IntervalTarget { interval: n },
            basis,
            method: method.into(),
        }
    }

    pub fn n(&self) -> u64 {
        self.target.interval
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// `Δ/√n` for this basis.
    pub fn characteristic(&self) -> f64 {
        self.basis.len() as f64 / (self.n() as f64).sqrt()
    }

    pub fn verify(&self) -> Result<()> {
        let missed = check_interval(self);
        if missed.is_empty() {
            Ok(())
        } else {
            Err(Error::Uncovered(format!(
                "{}: {} of {} differences missed",
                self.method,
                missed.len(),
                self.n()
            )))
        }
    }
}

/// The integers in `[1, n]` that are not differences of the basis.
pub fn check_interval(c: &IntervalCertificate) -> Vec<u64> {
    let n = c.n() as usize;
    let mut covered = vec![false; n + 1];
    for &a in &c.basis {
        for &b in &c.basis {
            let d = a - b;
            if d >= 1 && (d as u64) <= n as u64 {
                covered[d as usize] = true;
            }
        }
    }
    (1..=n as u64).filter(|&d| !covered[d as usize]).collect()
}
