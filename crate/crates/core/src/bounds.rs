//! Lower and upper bounds on difference sizes, and their aggregation into
//! brackets.
//!
//! Characteristic bounds `ð ≤ c` become size bounds `Δ ≤ ⌊c·√|G| + 1e-9⌋`;
//! strict bounds `Δ < x` become the largest integer below `x`. Upper bounds
//! that need the difference size of a smaller group take it from
//! [`best_bounds`] on that group, so brackets are computed by a memoized
//! recursion over quotients and subgroups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::path::Path;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, min_pairs_size, prime_power};
use crate::certify::Target;
use crate::constructions::{bose_chowla_basis, cyclic_certificate, recursive_p_basis, singer_basis};
use crate::data;
use crate::error::{Error, Result};
use crate::galois::{unit_group_claimed, GaloisRingSpec};
use crate::group::{count_involutions, decompose, GroupKind, GroupSpec};
use crate::interval::wichmann_basis;
use crate::solver::{min_difference_basis, SearchConfig, SearchStatus};

/// Kozma–Lev constant `4/√3`, valid for every finite group.
pub fn kozma_lev() -> f64 {
    4.0 / 3f64.sqrt()
}

/// Largest order for which constructions are attempted inside [`best_bounds`].
pub const CONSTRUCTION_MAX_ORDER: u64 = 1 << 16;

const SLACK: f64 = 1e-9;

/// Integer size bound from a real bound on `Δ`.
pub fn delta_from_real(x: f64, strict: bool) -> u64 {
    if strict {
        ((x - SLACK).ceil().max(0.0) as u64).saturating_sub(1)
    } else {
        (x + SLACK).floor().max(0.0) as u64
    }
}

/// Integer size bound from a characteristic bound `ð ≤ c` (or `ð < c`).
pub fn delta_from_characteristic(c: f64, order: u64, strict: bool) -> u64 {
    delta_from_real(c * (order as f64).sqrt(), strict)
}

/// Counting bound `⌈(1 + √(4|G| + 4|G₂| − 3))/2⌉`, where `G₂` are the involutions.
pub fn lower_bound(g: &GroupSpec) -> u64 {
    let n = g.order();
    if n == 1 {
        return 1;
    }
    min_pairs_size(n + count_involutions(g) - 1)
}

/// The involution-free bound `⌈(1 + √(4n − 3))/2⌉`.
pub fn basic_lower_bound(order: u64) -> u64 {
    if order <= 1 {
        1
    } else {
        min_pairs_size(order - 1)
    }
}

/// Bound for a subset with `a2` involutions and `a_gt2` other non-identity
/// elements: `⌈(1 + √(4|A_{>2}| + 8|A₂| + 1))/2⌉`.
pub fn subset_lower_bound_counts(a2: u64, a_gt2: u64) -> u64 {
    min_pairs_size(a_gt2 + 2 * a2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Effort {
    FormulasOnly,
    WithConstructions,
    WithSolver,
}

impl fmt::Display for Effort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Effort::FormulasOnly => "formulas-only",
            Effort::WithConstructions => "with-constructions",
            Effort::WithSolver => "with-solver",
        })
    }
}

impl FromStr for Effort {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formulas-only" | "formulas" => Ok(Effort::FormulasOnly),
            "with-constructions" | "constructions" => Ok(Effort::WithConstructions),
            "with-solver" | "solver" => Ok(Effort::WithSolver),
            _ => Err(Error::Parse(format!("unknown effort level '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Lower,
    Upper,
}

/// One contribution to a bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub side: Side,
    pub method: String,
    pub value: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub characteristic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl TraceEntry {
    fn upper(method: impl Into<String>, value: u64) -> Self {
        TraceEntry {
            side: Side::Upper,
            method: method.into(),
            value,
            characteristic: None,
            note: None,
        }
    }

    fn lower(method: impl Into<String>, value: u64) -> Self {
        TraceEntry {
            side: Side::Lower,
            ..TraceEntry::upper(method, value)
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub group: GroupSpec,
    pub lower: u64,
    pub upper: u64,
    /// `upper / √|G|`.
    pub characteristic_upper: f64,
    pub lower_method: String,
    pub upper_method: String,
    pub trace: Vec<TraceEntry>,
}

impl BoundRecord {
    fn new(group: GroupSpec) -> Self {
        let mut r = BoundRecord {
            group,
            lower: 0,
            upper: u64::MAX,
            characteristic_upper: f64::INFINITY,
            lower_method: String::new(),
            upper_method: String::new(),
            trace: Vec::new(),
        };
        let lb = lower_bound(&r.group);
        r.add(TraceEntry::lower("lb", lb));
        let basic = basic_lower_bound(r.group.order());
        r.add(TraceEntry::lower("involution-free", basic));
        r
    }

    fn add(&mut self, e: TraceEntry) {
        match e.side {
            Side::Lower if e.value > self.lower => {
                self.lower = e.value;
                self.lower_method = e.method.clone();
            }
            Side::Upper if e.value < self.upper => {
                self.upper = e.value;
                self.upper_method = e.method.clone();
                self.characteristic_upper = e.value as f64 / (self.group.order() as f64).sqrt();
            }
            _ => {}
        }
        self.trace.push(e);
    }

    /// Whether the bracket determines `Δ`.
    pub fn is_closed(&self) -> bool {
        self.lower == self.upper
    }
}

/// A closed-form characteristic bound from the catalog.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub method: String,
    /// The bound on `ð`, or `None` when the formula does not apply.
    pub characteristic: Option<f64>,
    /// The implied bound on `Δ`.
    pub upper: Option<u64>,
    pub strict: bool,
    /// Reason for omission, or a remark on how the formula was read.
    pub note: Option<String>,
}

impl CatalogEntry {
    fn bound(method: &str, c: f64, order: u64, strict: bool) -> Self {
        CatalogEntry {
            method: method.into(),
            characteristic: Some(c),
            upper: Some(delta_from_characteristic(c, order, strict)),
            strict,
            note: None,
        }
    }

    fn size(method: &str, delta: f64, order: u64, strict: bool) -> Self {
        CatalogEntry {
            method: method.into(),
            characteristic: Some(delta / (order as f64).sqrt()),
            upper: Some(delta_from_real(delta, strict)),
            strict,
            note: None,
        }
    }

    fn skip(method: &str, reason: impl Into<String>) -> Self {
        CatalogEntry {
            method: method.into(),
            characteristic: None,
            upper: None,
            strict: false,
            note: Some(reason.into()),
        }
    }

    fn note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn applies(&self) -> bool {
        self.characteristic.is_some()
    }
}

/// Exponents of an abelian p-group, if `g` is one.
fn p_group_exponents(factors: &[u64]) -> Option<(u64, Vec<u32>)> {
    let mut p0 = None;
    let mut exps = Vec::new();
    for &f in factors {
        let (p, e) = prime_power(f)?;
        if p0.is_some_and(|q| q != p) {
            return None;
        }
        p0 = Some(p);
        exps.push(e);
    }
    exps.sort();
    p0.map(|p| (p, exps))
}

fn abelian_from(p: u64, exps: &[u32]) -> GroupSpec {
    let f: Vec<u64> = exps.iter().filter(|&&e| e > 0).map(|&e| p.pow(e)).collect();
    GroupSpec::canonical_abelian(&f).expect("valid factors")
}

/// Canonical abelian structure used for bounds, when one is available.
fn canonical_structure(g: &GroupSpec) -> Option<GroupSpec> {
    match g.kind() {
        GroupKind::Abelian => g.canonical(),
        GroupKind::Star | GroupKind::RingUnits => decompose(g).ok().map(|d| d.spec),
        GroupKind::Generic => None,
    }
}

fn child_effort(effort: Effort) -> Effort {
    effort.min(Effort::WithConstructions)
}

fn child_upper(g: &GroupSpec, effort: Effort) -> u64 {
    best_bounds(g, child_effort(effort)).upper
}

fn cyclic_upper(n: u64, effort: Effort) -> u64 {
    child_upper(&GroupSpec::canonical_abelian(&[n]).expect("n >= 1"), effort)
}

/// Closed-form characteristic bounds applicable to `g`. Entries whose
/// formula does not apply carry the reason in `note`.
pub fn characteristic_bound_catalog(g: &GroupSpec) -> Vec<CatalogEntry> {
    catalog_at(g, Effort::FormulasOnly)
}

fn catalog_at(g: &GroupSpec, effort: Effort) -> Vec<CatalogEntry> {
    let n = g.order();
    let mut out = vec![CatalogEntry::bound("kozma-lev", kozma_lev(), n, false)];
    let canon = canonical_structure(g);
    let factors: Vec<u64> = canon.as_ref().and_then(|c| c.factors().map(|f| f.to_vec())).unwrap_or_default();
    let cyclic = canon.as_ref().is_some_and(|c| c.is_cyclic());

    if cyclic {
        out.push(CatalogEntry::bound("cyclic-3/2", 1.5, n, false));
        out.push(if n != 4 {
            CatalogEntry::bound("cyclic-sqrt2", 2f64.sqrt(), n, false)
        } else {
            CatalogEntry::skip("cyclic-sqrt2", "n = 4")
        });
        if n >= 9 {
            out.push(CatalogEntry::bound("cyclic-12/sqrt73", 12.0 / 73f64.sqrt(), n, false));
            out.push(if n != 292 {
                CatalogEntry::bound("cyclic-24/sqrt293", 24.0 / 293f64.sqrt(), n, false)
            } else {
                CatalogEntry::skip("cyclic-24/sqrt293", "n = 292")
            });
        } else {
            out.push(CatalogEntry::skip("cyclic-12/sqrt73", "n < 9"));
            out.push(CatalogEntry::skip("cyclic-24/sqrt293", "n < 9"));
        }
        out.push(interval_entry(n));
        out.push(singer_entry(n));
        out.push(bose_chowla_entry(n, effort));
        out.push(ruzsa_entry(n, effort));
    } else {
        for m in ["cyclic-3/2", "cyclic-sqrt2", "cyclic-12/sqrt73", "cyclic-24/sqrt293", "cyclic-interval"] {
            out.push(CatalogEntry::skip(m, "not cyclic"));
        }
    }

    match p_group_exponents(&factors) {
        Some((p, exps)) if !exps.is_empty() => p_group_entries(p, &exps, n, effort, &mut out),
        _ => {
            for m in ["p-group-theorem", "p-group-lemma", "boolean", "c4-power", "homocyclic-2", "homocyclic-odd"] {
                out.push(CatalogEntry::skip(m, "not an abelian p-group"));
            }
        }
    }

    out.push(ring_units_entry(&factors, n));
    out
}

fn interval_entry(n: u64) -> CatalogEntry {
    if n < 3 {
        return CatalogEntry::skip("cyclic-interval", "n < 3");
    }
    let m = (n - 1).div_ceil(2);
    let size = data::interval_basis(m).map_or_else(|| wichmann_basis(m).len(), |r| r.len());
    CatalogEntry::size("cyclic-interval", size as f64, n, false)
}

/// `q` with `n = q² + q + 1`, `q` a prime power.
fn singer_q(n: u64) -> Option<u64> {
    let q = (1..).take_while(|&q: &u64| q * q + q + 1 <= n).last()?;
    (q * q + q + 1 == n && prime_power(q).is_some()).then_some(q)
}

/// `q` with `n = q² − 1`, `q` a prime power.
fn bose_chowla_q(n: u64) -> Option<u64> {
    let q = crate::arith::floor_sqrt(n + 1);
    (q * q == n + 1 && prime_power(q).is_some()).then_some(q)
}

fn singer_entry(n: u64) -> CatalogEntry {
    match singer_q(n) {
        Some(q) => CatalogEntry::size("singer", (q + 1) as f64, n, false),
        None => CatalogEntry::skip("singer", "order is not q^2+q+1"),
    }
}

fn bose_chowla_entry(n: u64, effort: Effort) -> CatalogEntry {
    match bose_chowla_q(n) {
        Some(q) => {
            let child = cyclic_upper(q - 1, effort);
            CatalogEntry::size("bose-chowla", (q - 1 + child) as f64, n, false)
        }
        None => CatalogEntry::skip("bose-chowla", "order is not q^2-1"),
    }
}

fn ruzsa_entry(n: u64, effort: Effort) -> CatalogEntry {
    let p = crate::arith::floor_sqrt(n) + 1;
    if n > 2 && p * (p - 1) == n && is_prime(p) {
        let v = p - 3 + cyclic_upper(p, effort) + cyclic_upper(p - 1, effort);
        CatalogEntry::size("ruzsa", v as f64, n, false)
    } else {
        CatalogEntry::skip("ruzsa", "order is not p^2-p")
    }
}

/// `sup ð` over all abelian p-groups as far as the catalog knows it.
fn sup_abelian_p(p: u64) -> f64 {
    if p >= 11 {
        p_group_theorem(p)
    } else {
        kozma_lev()
    }
}

/// `(√p − 1)/(√p − 3) · 24/√293`.
pub fn p_group_theorem(p: u64) -> f64 {
    let s = (p as f64).sqrt();
    (s - 1.0) / (s - 3.0) * 24.0 / 293f64.sqrt()
}

fn p_group_entries(p: u64, exps: &[u32], n: u64, effort: Effort, out: &mut Vec<CatalogEntry>) {
    let rank = exps.len() as u32;
    if p >= 11 {
        out.push(
            CatalogEntry::bound("p-group-theorem", p_group_theorem(p), n, false)
                .note("constant 24/sqrt(293) as in the theorem body; the abstract states sqrt(2)"),
        );
    } else {
        out.push(CatalogEntry::skip("p-group-theorem", "p < 11"));
    }
    if p % 2 == 1 {
        // ð[Ab_p^r] ≤ ð[Ab_p^1] + ð[Ab_p] Σ_{i=2}^{r} p^{-⌊i/2⌋/2}
        let tail: f64 = (2..=rank).map(|i| (p as f64).powf(-((i / 2) as f64) / 2.0)).sum();
        let c = 24.0 / 293f64.sqrt() + sup_abelian_p(p) * tail;
        out.push(CatalogEntry::bound("p-group-lemma", c, n, false));
    } else {
        out.push(CatalogEntry::skip("p-group-lemma", "p = 2"));
    }

    let homocyclic = exps.iter().all(|&e| e == exps[0]);
    let k = exps[0];
    if p == 2 && homocyclic && k == 1 && rank >= 2 {
        let h = rank / 2;
        let x = if rank % 2 == 0 { 2f64.powi(h as i32 + 1) } else { 3.0 * 2f64.powi(h as i32) };
        out.push(CatalogEntry::size("boolean", x, n, true));
    } else {
        out.push(CatalogEntry::skip("boolean", "not C_2^m with m >= 2"));
    }
    if p == 2 && homocyclic && k == 2 {
        let m = rank as i32;
        let b = abelian_from(2, &vec![1; rank as usize]);
        let ch2 = child_upper(&b, effort) as f64 / 2f64.powi(m).sqrt();
        let c = 1.0 + ch2 / 2f64.powi(m).sqrt() - 1.0 / 2f64.powi(m);
        out.push(CatalogEntry::bound("c4-power", c, n, false));
        let closed = 1.0 - 1.0 / 2f64.powi(m) + 3.0 / 2f64.powi(m + 1).sqrt();
        out.push(CatalogEntry::bound("c4-power-closed", closed, n, true));
    } else {
        out.push(CatalogEntry::skip("c4-power", "not C_4^n"));
    }
    if homocyclic && rank >= 2 && (p > 2 || k >= 2) {
        let h = (rank / 2) as i32;
        let ck = cyclic_upper(p.pow(k), effort) as f64 / (p.pow(k) as f64).sqrt();
        if p == 2 {
            let c = if rank % 2 == 0 {
                1.0 + (3.0 / 2f64.sqrt() + kozma_lev()) / 2f64.powi(h).sqrt()
            } else {
                ck * (1.0 + 3.0 / 2f64.powi(h + 1).sqrt()) + 4.0 / (3.0 * 2f64.powi(h)).sqrt()
            };
            out.push(
                CatalogEntry::bound("homocyclic-2", c, n, false)
                    .note("odd-rank form read with the characteristic of C_{2^k}"),
            );
            out.push(CatalogEntry::skip("homocyclic-odd", "p = 2"));
        } else {
            let tail = sup_abelian_p(p) / (p as f64).powi(h).sqrt();
            let c = if rank % 2 == 0 { 1.0 + tail } else { ck + tail };
            out.push(
                CatalogEntry::bound("homocyclic-odd", c, n, true)
                    .note("exponent r in the tail read as n (half the rank)"),
            );
            out.push(CatalogEntry::skip("homocyclic-2", "p odd"));
        }
    } else {
        out.push(CatalogEntry::skip("homocyclic-2", "not C_{2^k}^m with k >= 2, m >= 2"));
        out.push(CatalogEntry::skip("homocyclic-odd", "not homocyclic of rank >= 2"));
    }
}

/// Galois rings `R` with `R × U(R)` isomorphic to the abelian group `factors`.
fn ring_units_rings(factors: &[u64], n: u64) -> Vec<GaloisRingSpec> {
    let mut out = Vec::new();
    let mut want = factors.to_vec();
    want.sort();
    for (p, _) in factorize(n) {
        let mut kr = 1u32;
        while p.checked_pow(kr).is_some_and(|s| s * s <= n * p) {
            for k in 1..=kr {
                if kr % k != 0 {
                    continue;
                }
                let r = kr / k;
                let size = p.pow(kr);
                let units = size - size / p.pow(r);
                if size.checked_mul(units) != Some(n) {
                    continue;
                }
                let Ok(ring) = GaloisRingSpec::new(p, k, r) else { continue };
                let mut f: Vec<u64> = vec![p.pow(k); r as usize];
                if let Some(u) = unit_group_claimed(&ring).factors() {
                    f.extend(u);
                }
                let Ok(c) = GroupSpec::canonical_abelian(&f) else { continue };
                let mut got = c.factors().unwrap_or(&[]).to_vec();
                got.sort();
                if got == want {
                    out.push(ring);
                }
            }
            kr += 1;
        }
    }
    out
}

fn ring_units_entry(factors: &[u64], n: u64) -> CatalogEntry {
    let Some(ring) = ring_units_rings(factors, n).into_iter().next() else {
        return CatalogEntry::skip("ring-units", "not of the form R x U(R)");
    };
    let f = ring.residue_field_size() as f64;
    if f < 2.0 {
        return CatalogEntry::skip("ring-units", "residue field too small");
    }
    let c = (1.0 - 1.0 / f).sqrt() + kozma_lev() * (1.0 / f.sqrt() + 1.0 / (f - 1.0).sqrt());
    CatalogEntry::bound("ring-units", c, n, false).note(&format!("R = GR({}^{},{})", ring.p, ring.k, ring.r))
}

/// `Δ[C_{p²−p}] ≤ p − 3 + Δ[C_p] + Δ[C_{p−1}]`, with the child sizes from
/// the bundled optima.
pub fn ruzsa_formula_bound(p: u64) -> Result<TraceEntry> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let get = |m: u64| {
        data::cyclic_delta(m).ok_or_else(|| Error::Precondition(format!("difference size of C{m} is not available")))
    };
    let v = p + get(p)? + get(p - 1)? - 3;
    Ok(TraceEntry::upper("ruzsa", v).note(format!("C{}", p * p - p)))
}

/// Coordinate-aligned subgroups `H` of a canonical abelian group, as
/// `(H, G/H)` with duplicates removed.
fn coordinate_splits(factors: &[u64]) -> Vec<(GroupSpec, GroupSpec)> {
    let mut counts: BTreeMap<(u64, u32), usize> = BTreeMap::new();
    for &f in factors {
        let (p, e) = prime_power(f).expect("canonical factors are prime powers");
        *counts.entry((p, e)).or_default() += 1;
    }
    // per class, every multiset of subgroup exponents
    let mut acc: Vec<(Vec<u64>, Vec<u64>)> = vec![(vec![], vec![])];
    for (&(p, e), &c) in &counts {
        let mut choices: Vec<Vec<u32>> = Vec::new();
        fn rec(c: usize, min: u32, e: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == c {
                out.push(cur.clone());
                return;
            }
            for a in min..=e {
                cur.push(a);
                rec(c, a, e, cur, out);
                cur.pop();
            }
        }
        rec(c, 0, e, &mut Vec::new(), &mut choices);
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for (h, q) in &acc {
            for ch in &choices {
                let mut h2 = h.clone();
                let mut q2 = q.clone();
                for &a in ch {
                    if a > 0 {
                        h2.push(p.pow(a));
                    }
                    if a < e {
                        q2.push(p.pow(e - a));
                    }
                }
                next.push((h2, q2));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .filter(|(h, q)| !h.is_empty() && !q.is_empty())
        .map(|(h, q)| {
            (
                GroupSpec::canonical_abelian(&h).expect("valid"),
                GroupSpec::canonical_abelian(&q).expect("valid"),
            )
        })
        .collect()
}

/// Bounds from the group structure alone: `⌈(|G|+1)/2⌉`, `|H| + |G/H| − 1`
/// and `Δ[H]·Δ[G/H]` over coordinate subgroups, and the p-group recursions.
pub fn structural_upper_bounds(g: &GroupSpec) -> Vec<TraceEntry> {
    structural_at(g, Effort::FormulasOnly)
}

fn structural_at(g: &GroupSpec, effort: Effort) -> Vec<TraceEntry> {
    let n = g.order();
    let mut out = vec![TraceEntry::upper("trivial", n / 2 + 1)];
    let Some(canon) = canonical_structure(g) else { return out };
    let factors = canon.factors().unwrap_or(&[]).to_vec();
    if n == 1 {
        return out;
    }
    if let Some(d) = crate::arith::divisors(n)
        .into_iter()
        .filter(|&d| d > 1 && d < n)
        .min_by_key(|&d| (d + n / d, d))
    {
        out.push(TraceEntry::upper("subgroup", d + n / d - 1).note(format!("|H| = {d}")));
    }
    let best = coordinate_splits(&factors)
        .into_iter()
        .map(|(h, q)| (child_upper(&h, effort) * child_upper(&q, effort), h, q))
        .min_by_key(|(v, h, _)| (*v, h.order()));
    if let Some((v, h, q)) = best {
        out.push(TraceEntry::upper("product", v).note(format!("H = {h}, G/H = {q}")));
    }
    if let Some((p, exps)) = p_group_exponents(&factors) {
        if let Some(e) = recursive_p_formula(p, &exps, effort) {
            out.push(e);
        }
    }
    out
}

/// Best instance of `Δ[G] ≤ Δ[K]·p^{kr} + Δ[ideal] − 1` over a small family of
/// parameter choices `(k, r)` and coordinate blocks.
fn recursive_p_formula(p: u64, exps: &[u32], effort: Effort) -> Option<TraceEntry> {
    let m = exps.len();
    let mut best: Option<(u64, String)> = None;
    let mut consider = |kernel: Vec<u32>, ideal: Vec<u32>, k: u32, r: usize| {
        let kk = child_upper(&abelian_from(p, &kernel), effort);
        let ii = child_upper(&abelian_from(p, &ideal), effort);
        let v = kk * p.pow(k * r as u32) + ii - 1;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, format!("k={k}, r={r}")));
        }
    };
    if p % 2 == 1 {
        // ascending exponents; block = 2r consecutive coordinates
        for r in 1..=m / 2 {
            for s in 0..=m - 2 * r {
                for k in 1..=exps[s] {
                    for lowest in [true, false] {
                        let mut kernel = exps.to_vec();
                        for e in &mut kernel[s..s + 2 * r] {
                            *e -= k;
                        }
                        let mut ideal = exps.to_vec();
                        let range = if lowest { s..s + r } else { s + r..s + 2 * r };
                        for e in &mut ideal[range] {
                            *e -= 1;
                        }
                        consider(kernel, ideal, k, r);
                    }
                }
            }
        }
    } else {
        let mut desc = exps.to_vec();
        desc.reverse();
        let max = desc[0];
        for k in 1..max {
            let eligible = desc.iter().filter(|&&e| e > k).count();
            for r in 1..=eligible {
                for first_top in [true, false] {
                    let first: Vec<usize> = if first_top {
                        (0..r).collect()
                    } else {
                        (eligible - r..eligible).collect()
                    };
                    let rest: Vec<usize> = (0..m).filter(|i| !first.contains(i)).collect();
                    let second: Vec<usize> = if k == 1 {
                        vec![]
                    } else {
                        let ok: Vec<usize> = rest.iter().copied().filter(|&i| desc[i] >= k - 1).collect();
                        if ok.len() < r {
                            continue;
                        }
                        ok[ok.len() - r..].to_vec()
                    };
                    let mut kernel = desc.clone();
                    for &i in &first {
                        kernel[i] -= k + 1;
                    }
                    for &i in &second {
                        kernel[i] -= k - 1;
                    }
                    let mut ideal = desc.clone();
                    for &i in &first {
                        ideal[i] -= 1;
                    }
                    consider(kernel, ideal, k, r);
                }
            }
        }
    }
    best.map(|(v, params)| TraceEntry::upper("recursive-p", v).note(params))
}

type Memo = RwLock<HashMap<String, BoundRecord>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

fn memo_key(canon: &GroupSpec, effort: Effort) -> String {
    format!("{}@{}", canon.descriptor(), effort)
}

/// Best known bracket for `Δ[g]` at the given effort, with a solver budget
/// from [`SearchConfig::default`].
pub fn best_bounds(g: &GroupSpec, effort: Effort) -> BoundRecord {
    best_bounds_with(g, effort, &SearchConfig::default())
}

/// [`best_bounds`] with an explicit solver configuration.
pub fn best_bounds_with(g: &GroupSpec, effort: Effort, cfg: &SearchConfig) -> BoundRecord {
    let canon = canonical_structure(g);
    let key = canon.as_ref().map(|c| memo_key(c, effort));
    if let Some(k) = &key {
        if let Some(r) = memo().read().expect("memo lock").get(k) {
            let mut r = r.clone();
            r.group = g.clone();
            return r;
        }
    }
    let rec = compute(g, effort, cfg);
    if let Some(k) = key {
        // open brackets from a budget-limited search depend on the budget
        if effort != Effort::WithSolver || rec.is_closed() {
            memo().write().expect("memo lock").entry(k).or_insert_with(|| rec.clone());
        }
    }
    rec
}

fn compute(g: &GroupSpec, effort: Effort, cfg: &SearchConfig) -> BoundRecord {
    let mut rec = match effort {
        Effort::FormulasOnly => BoundRecord::new(g.clone()),
        Effort::WithConstructions => best_bounds_with(g, Effort::FormulasOnly, cfg),
        Effort::WithSolver => best_bounds_with(g, Effort::WithConstructions, cfg),
    };
    rec.group = g.clone();
    match effort {
        Effort::FormulasOnly => {
            for e in structural_at(g, effort) {
                rec.add(e);
            }
            for c in catalog_at(g, effort) {
                if let (Some(v), Some(ch)) = (c.upper, c.characteristic) {
                    let mut e = TraceEntry::upper(c.method, v);
                    e.characteristic = Some(ch);
                    e.note = c.note;
                    rec.add(e);
                }
            }
        }
        Effort::WithConstructions => {
            for e in structural_at(g, effort) {
                if e.method != "trivial" && e.method != "subgroup" {
                    rec.add(e);
                }
            }
            for c in catalog_at(g, effort) {
                if matches!(c.method.as_str(), "bose-chowla" | "ruzsa" | "c4-power" | "homocyclic-2" | "homocyclic-odd") {
                    if let Some(v) = c.upper {
                        rec.add(TraceEntry::upper(c.method, v));
                    }
                }
            }
            for (method, size) in construction_sizes(g) {
                rec.add(TraceEntry::upper(method, size));
            }
        }
        Effort::WithSolver => {
            if !rec.is_closed() {
                solver_entries(g, cfg, &mut rec);
            }
        }
    }
    debug_assert!(rec.lower <= rec.upper, "bracket inverted for {g}");
    rec
}

fn construction_sizes(g: &GroupSpec) -> Vec<(String, u64)> {
    let n = g.order();
    let mut out = Vec::new();
    if n > CONSTRUCTION_MAX_ORDER {
        return out;
    }
    let Some(canon) = canonical_structure(g) else { return out };
    let factors = canon.factors().unwrap_or(&[]).to_vec();
    if canon.is_cyclic() {
        if let Ok(c) = cyclic_certificate(n) {
            out.push((c.method.clone(), c.size() as u64));
        }
        if let Some(q) = singer_q(n) {
            if let Ok(c) = singer_basis(q) {
                out.push(("singer".into(), c.size() as u64));
            }
        }
        if let Some(q) = bose_chowla_q(n) {
            if let Ok(c) = bose_chowla_basis(q) {
                out.push(("bose-chowla".into(), c.size() as u64));
            }
        }
    }
    if n > 1 && p_group_exponents(&factors).is_some() {
        if let Ok(c) = recursive_p_basis(&canon) {
            out.push(("recursive-p".into(), c.size() as u64));
        }
    }
    out
}

fn solver_entries(g: &GroupSpec, cfg: &SearchConfig, rec: &mut BoundRecord) {
    if let Some(canon) = canonical_structure(g) {
        if canon.is_cyclic() {
            if let Some(d) = data::cyclic_delta(g.order()) {
                rec.add(TraceEntry::lower("solver-bundled", d));
                rec.add(TraceEntry::upper("solver-bundled", d));
                return;
            }
        }
    }
    if g.order() > crate::solver::SOLVER_MAX_ORDER {
        return;
    }
    let mut cfg = cfg.clone();
    cfg.initial_upper = Some(rec.upper);
    let Ok(r) = min_difference_basis(g, &Target::Full, &cfg) else { return };
    match r.status {
        SearchStatus::ProvedOptimal => {
            rec.add(TraceEntry::lower("solver", r.delta));
            rec.add(TraceEntry::upper("solver", r.delta));
        }
        SearchStatus::UpperOnly => {
            rec.add(TraceEntry::lower("solver", r.lower).note("budget exhausted"));
            rec.add(TraceEntry::upper("solver", r.delta).note("budget exhausted"));
        }
    }
}

/// Drops every memoized record.
pub fn clear_memo() {
    memo().write().expect("memo lock").clear();
}

/// Merges records from a cache file into the memo. A missing file is not an
/// error. Returns the number of records read.
pub fn load_cache(path: &Path) -> Result<usize> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e.into()),
    };
    let map: BTreeMap<String, BoundRecord> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("cache file: {e}")))?;
    let count = map.len();
    let mut m = memo().write().expect("memo lock");
    for (k, v) in map {
        if v.lower <= v.upper {
            m.entry(k).or_insert(v);
        }
    }
    Ok(count)
}

/// Writes the memo to `path` as a JSON object mapping `descriptor@effort`
/// to records. Writers hold an exclusive lock on `path.lock` and replace the
/// file by rename.
pub fn save_cache(path: &Path) -> Result<()> {
    let lock_path = path.with_extension("lock");
    let lock = OpenOptions::new().create(true).truncate(false).write(true).open(&lock_path)?;
    lock.lock()?;
    // keep records other processes wrote meanwhile
    load_cache(path)?;
    let map: BTreeMap<String, BoundRecord> = memo()
        .read()
        .expect("memo lock")
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let text = serde_json::to_string_pretty(&map)?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = File::create(&tmp)?;
        std::io::Write::write_all(&mut f, text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    lock.unlock()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;
    use crate::oracle::brute_force_delta;

    fn g(s: &str) -> GroupSpec {
        parse_group_spec(s).unwrap()
    }

    fn entry<'a>(c: &'a [CatalogEntry], m: &str) -> &'a CatalogEntry {
        c.iter().find(|e| e.method == m).unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&g("C2^4")), 6);
        assert_eq!(lower_bound(&g("C2^5")), 9);
        assert_eq!(lower_bound(&g("C9")), 4);
        assert_eq!(lower_bound(&GroupSpec::trivial()), 1);
        assert_eq!(basic_lower_bound(16), 5);
        // {±1, ±2} with no involutions: k(k-1) >= 4
        assert_eq!(subset_lower_bound_counts(0, 4), 3);
        assert_eq!(subset_lower_bound_counts(1, 0), 2);
    }

    #[test]
    fn lower_bound_matches_real_formula() {
        for n in 1..200u64 {
            for inv in [0, 1, 3, 7] {
                if inv >= n {
                    continue;
                }
                let x = (1.0 + ((4 * (n + inv)) as f64 - 3.0).sqrt()) / 2.0;
                assert_eq!(min_pairs_size(n + inv - 1).max(1), (x - 1e-9).ceil() as u64, "n={n} inv={inv}");
            }
        }
    }

    #[test]
    fn conversion_is_conservative() {
        assert_eq!(delta_from_real(3.0, false), 3);
        assert_eq!(delta_from_real(3.0 - 1e-12, false), 3);
        assert_eq!(delta_from_real(16.0, true), 15);
        assert_eq!(delta_from_real(15.5, true), 15);
        assert_eq!(delta_from_characteristic(1.5, 4, false), 3);
    }

    #[test]
    fn structural_examples() {
        let s = structural_upper_bounds(&g("C2^4"));
        assert_eq!(s.iter().find(|e| e.method == "subgroup").unwrap().value, 7);
        assert_eq!(s.iter().find(|e| e.method == "trivial").unwrap().value, 9);
        let s = structural_upper_bounds(&g("C4"));
        assert_eq!(s.iter().map(|e| e.value).min(), Some(3));
    }

    #[test]
    fn coordinate_splits_cover_divisors() {
        let splits = coordinate_splits(&[2, 2, 4]);
        let mut orders: Vec<u64> = splits.iter().map(|(h, _)| h.order()).collect();
        orders.sort();
        orders.dedup();
        assert_eq!(orders, vec![2, 4, 8]);
        for (h, q) in &splits {
            assert_eq!(h.order() * q.order(), 16);
        }
    }

    #[test]
    fn catalog_examples() {
        let c = characteristic_bound_catalog(&g("C4"));
        let e = entry(&c, "c4-power");
        assert!((e.characteristic.unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(e.upper, Some(3));
        assert!(!entry(&c, "cyclic-sqrt2").applies());

        let c = characteristic_bound_catalog(&g("C11^2"));
        let e = entry(&c, "p-group-theorem");
        let want = (11f64.sqrt() - 1.0) / (11f64.sqrt() - 3.0) * 24.0 / 293f64.sqrt();
        assert!((e.characteristic.unwrap() - want).abs() < 1e-12);
        assert!(e.characteristic.unwrap() > 10.0);

        let c = characteristic_bound_catalog(&g("C2^6"));
        assert_eq!(entry(&c, "boolean").upper, Some(15));
        let c = characteristic_bound_catalog(&g("C2^5"));
        assert_eq!(entry(&c, "boolean").upper, Some(11));
        assert!(!entry(&c, "p-group-theorem").applies());
        assert!(entry(&c, "ring-units").note.is_some());
    }

    #[test]
    fn ring_units_shapes() {
        // GR(3,1) x U = C3 x C2, GR(4,1) x U = C4 x C2, GR(9,1) x U = C9 x C3 x C2
        for (spec, ring) in [("C6", (3, 1, 1)), ("C2xC4", (2, 2, 1)), ("C2xC3xC9", (3, 2, 1))] {
            let canon = g(spec);
            let rings = ring_units_rings(canon.factors().unwrap(), canon.order());
            assert!(rings.iter().any(|r| (r.p, r.k, r.r) == ring), "{spec}");
            assert!(entry(&characteristic_bound_catalog(&canon), "ring-units").applies());
        }
        assert!(!entry(&characteristic_bound_catalog(&g("C5")), "ring-units").applies());
    }

    #[test]
    fn best_bounds_examples() {
        let r = best_bounds(&g("C3xC3"), Effort::WithConstructions);
        assert_eq!((r.lower, r.upper), (4, 4));
        let r = best_bounds(&g("C2^6"), Effort::FormulasOnly);
        assert_eq!(r.lower, 12);
        assert!(r.upper <= 15 && r.upper >= 14);
        let r = best_bounds(&GroupSpec::trivial(), Effort::FormulasOnly);
        assert_eq!((r.lower, r.upper), (1, 1));
    }

    #[test]
    fn brackets_contain_oracle_values() {
        for n in 1..=20u64 {
            for grp in crate::group::abelian_groups_of_order(n) {
                let d = brute_force_delta(&grp, &Target::Full).unwrap();
                let mut last: Option<(u64, u64)> = None;
                for e in [Effort::FormulasOnly, Effort::WithConstructions, Effort::WithSolver] {
                    let r = best_bounds(&grp, e);
                    assert!(r.lower <= d && d <= r.upper, "{grp} {e}: {} <= {d} <= {}", r.lower, r.upper);
                    assert!(r.upper <= n / 2 + 1);
                    if let Some((lo, up)) = last {
                        assert!(r.lower >= lo && r.upper <= up, "{grp} widened at {e}");
                    }
                    last = Some((r.lower, r.upper));
                }
                for c in characteristic_bound_catalog(&grp) {
                    if let Some(u) = c.upper {
                        assert!(d <= u, "{grp}: {} gives {u} < {d}", c.method);
                    }
                }
            }
        }
    }

    #[test]
    fn effort_parses() {
        for e in [Effort::FormulasOnly, Effort::WithConstructions, Effort::WithSolver] {
            assert_eq!(e.to_string().parse::<Effort>().unwrap(), e);
        }
        assert!("fast".parse::<Effort>().is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("diffbase-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bounds.json");
        best_bounds(&g("C5xC5"), Effort::FormulasOnly);
        save_cache(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let map: BTreeMap<String, BoundRecord> = serde_json::from_str(&text).unwrap();
        assert!(map.contains_key("C5^2@formulas-only"));
        assert!(load_cache(&path).unwrap() >= 1);
        assert_eq!(load_cache(&dir.join("missing.json")).unwrap(), 0);
        fs::remove_dir_all(&dir).unwrap();
    }
}
