//! Finite groups: abelian groups as products of cyclic factors, Cayley tables
//! for small non-abelian fixtures, and the two ring-backed groups `R⋆R` and
//! `R × U(R)` whose operations are computed on demand.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, gcd, lcm};
use crate::error::{Error, Result};
use crate::galois::{star_inverse, star_op, GaloisRingSpec, RingElement};

/// Default bound on group orders accepted by parsing and table materialization.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Abelian,
    Generic,
    Star,
    RingUnits,
}

#[derive(PartialEq, Eq, Hash)]
struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Abelian(Vec<u64>),
    Generic(Arc<CayleyTable>),
    Star(GaloisRingSpec),
    RingUnits(GaloisRingSpec),
}

/// A finite group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    repr: Repr,
    order: u64,
}

/// A group element. Abelian groups use residue vectors, Cayley-table groups a
/// single index, and the ring-backed groups the concatenated coefficient
/// vectors of their two components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl From<Vec<u64>> for GroupElement {
    fn from(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum GroupJson {
    Abelian(Vec<u64>),
    Cayley(Vec<Vec<u32>>),
    Star(GaloisRingSpec),
    RingUnits(GaloisRingSpec),
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match &self.repr {
            Repr::Abelian(f) => GroupJson::Abelian(f.clone()),
            Repr::Generic(_) => GroupJson::Cayley(self.table().expect("generic")),
            Repr::Star(r) => GroupJson::Star(r.clone()),
            Repr::RingUnits(r) => GroupJson::RingUnits(r.clone()),
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GroupJson::deserialize(d)?;
        let g = match j {
            GroupJson::Abelian(f) => GroupSpec::abelian(f),
            GroupJson::Cayley(t) => GroupSpec::from_cayley(t),
            GroupJson::Star(r) => Ok(GroupSpec::star(r)),
            GroupJson::RingUnits(r) => Ok(GroupSpec::ring_units(r)),
        };
        g.map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({})", self.descriptor())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn product(factors: &[u64]) -> Option<u64> {
    factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f))
}

impl GroupSpec {
    /// Abelian group with the given cyclic factors, kept in the given order.
    pub fn abelian(factors: Vec<u64>) -> Result<Self> {
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::Parse(format!("cyclic factor {f} must be at least 2")));
        }
        let order = product(&factors).ok_or(Error::Overflow {
            order: u128::MAX,
            max: DEFAULT_MAX_ORDER as usize,
        })?;
        Ok(GroupSpec {
            repr: Repr::Abelian(factors),
            order,
        })
    }

    /// Cyclic group `C_n` as a single factor (trivial group for `n = 1`).
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        let factors = if n == 1 { vec![] } else { vec![n] };
        GroupSpec {
            repr: Repr::Abelian(factors),
            order: n,
        }
    }

    pub fn trivial() -> Self {
        GroupSpec::cyclic(1)
    }

    /// Primary decomposition of `∏ C_{n_i}`, sorted by `(prime, exponent)`.
    pub fn canonical_abelian(factors: &[u64]) -> Result<Self> {
        let mut pp: Vec<(u64, u32)> = Vec::new();
        for &n in factors {
            if n == 0 {
                return Err(Error::Parse("cyclic factor 0".into()));
            }
            pp.extend(factorize(n));
        }
        pp.sort();
        GroupSpec::abelian(pp.into_iter().map(|(p, e)| p.pow(e)).collect())
    }

    /// Group from a Cayley table whose identity is index 0. The group axioms
    /// are checked.
    pub fn from_cayley(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in &table {
            for &v in row {
                if v as usize >= n {
                    return Err(Error::InvalidTable(format!("entry {v} out of range")));
                }
                mul.push(v);
            }
        }
        for a in 0..n {
            if mul[a] as usize != a || mul[a * n] as usize != a {
                return Err(Error::InvalidTable("index 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                row_seen[mul[a * n + b] as usize] = true;
                col_seen[mul[b * n + a] as usize] = true;
            }
            if row_seen.iter().chain(&col_seen).any(|s| !s) {
                return Err(Error::InvalidTable("not a Latin square".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Self::from_table_unchecked(n, mul))
    }

    fn from_table_unchecked(n: usize, mul: Vec<u32>) -> Self {
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        GroupSpec {
            repr: Repr::Generic(Arc::new(CayleyTable { n, mul, inv })),
            order: n as u64,
        }
    }

    /// The star group `R⋆R`.
    pub fn star(ring: GaloisRingSpec) -> Self {
        let order = ring.size() * ring.size();
        GroupSpec {
            repr: Repr::Star(ring),
            order,
        }
    }

    /// The group `R × U(R)`, additive in the first and multiplicative in the
    /// second component.
    pub fn ring_units(ring: GaloisRingSpec) -> Self {
        let order = ring.size() * ring.unit_count();
        GroupSpec {
            repr: Repr::RingUnits(ring),
            order,
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self.repr {
            Repr::Abelian(_) => GroupKind::Abelian,
            Repr::Generic(_) => GroupKind::Generic,
            Repr::Star(_) => GroupKind::Star,
            Repr::RingUnits(_) => GroupKind::RingUnits,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Cyclic factors of an abelian-kind group.
    pub fn factors(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Abelian(f) => Some(f),
            _ => None,
        }
    }

    pub fn ring(&self) -> Option<&GaloisRingSpec> {
        match &self.repr {
            Repr::Star(r) | Repr::RingUnits(r) => Some(r),
            _ => None,
        }
    }

    /// The Cayley table of a generic-kind group.
    pub fn table(&self) -> Option<Vec<Vec<u32>>> {
        match &self.repr {
            Repr::Generic(t) => Some(t.mul.chunks(t.n).map(|r| r.to_vec()).collect()),
            _ => None,
        }
    }

    /// Whether the operation is commutative.
    pub fn is_commutative(&self) -> bool {
        match &self.repr {
            Repr::Generic(t) => {
                (0..t.n).all(|a| (0..t.n).all(|b| t.mul[a * t.n + b] == t.mul[b * t.n + a]))
            }
            _ => true,
        }
    }

    /// Whether an abelian-kind group is in primary canonical form.
    pub fn is_canonical(&self) -> bool {
        match self.canonical() {
            Some(c) => c == *self,
            None => false,
        }
    }

    /// Primary canonical form of an abelian-kind group.
    pub fn canonical(&self) -> Option<GroupSpec> {
        self.factors()
            .map(|f| GroupSpec::canonical_abelian(f).expect("valid factors"))
    }

    pub fn is_cyclic(&self) -> bool {
        match &self.repr {
            Repr::Abelian(f) => {
                for i in 0..f.len() {
                    for j in i + 1..f.len() {
                        if gcd(f[i], f[j]) != 1 {
                            return false;
                        }
                    }
                }
                true
            }
            _ => self
                .elements()
                .any(|x| element_order(self, &x) == self.order),
        }
    }

    /// Human-readable descriptor. Abelian groups print factors in ascending
    /// order, e.g. `C2^2xC4`; this text parses back to the canonical form.
    pub fn descriptor(&self) -> String {
        match &self.repr {
            Repr::Abelian(f) => {
                if f.is_empty() {
                    return "C1".into();
                }
                let mut sorted = f.clone();
                sorted.sort();
                let mut parts = Vec::new();
                let mut i = 0;
                while i < sorted.len() {
                    let mut j = i;
                    while j < sorted.len() && sorted[j] == sorted[i] {
                        j += 1;
                    }
                    if j - i == 1 {
                        parts.push(format!("C{}", sorted[i]));
                    } else {
                        parts.push(format!("C{}^{}", sorted[i], j - i));
                    }
                    i = j;
                }
                parts.join("x")
            }
            Repr::Generic(t) => format!("cayley[{}]", t.n),
            Repr::Star(r) => format!("star(GR({}^{},{}))", r.p, r.k, r.r),
            Repr::RingUnits(r) => format!("GR({0}^{1},{2})xU(GR({0}^{1},{2}))", r.p, r.k, r.r),
        }
    }

    /// `C<n>` for cyclic abelian groups, the descriptor otherwise.
    pub fn name(&self) -> String {
        if self.factors().is_some() && self.is_cyclic() {
            format!("C{}", self.order)
        } else {
            self.descriptor()
        }
    }

    /// Number of coordinates in the element representation.
    pub fn arity(&self) -> usize {
        match &self.repr {
            Repr::Abelian(f) => f.len(),
            Repr::Generic(_) => 1,
            Repr::Star(r) | Repr::RingUnits(r) => 2 * r.degree(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.repr {
            Repr::Abelian(f) => GroupElement::new(vec![0; f.len()]),
            Repr::Generic(_) => GroupElement::new(vec![0]),
            Repr::Star(r) => GroupElement::new(vec![0; 2 * r.degree()]),
            Repr::RingUnits(r) => {
                let mut v = vec![0; 2 * r.degree()];
                v[r.degree()] = 1;
                GroupElement::new(v)
            }
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        if x.coords.len() != self.arity() {
            return false;
        }
        match &self.repr {
            Repr::Abelian(f) => x.coords.iter().zip(f).all(|(&c, &m)| c < m),
            Repr::Generic(t) => (x.coords[0] as usize) < t.n,
            Repr::Star(r) => x.coords.iter().all(|&c| c < r.char_modulus()),
            Repr::RingUnits(r) => {
                let (_, u) = split(r, x);
                x.coords.iter().all(|&c| c < r.char_modulus()) && r.is_unit(&u)
            }
        }
    }

    /// Errors unless `x` belongs to the group.
    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("{:?}", x.coords)))
        }
    }

    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match &self.repr {
            Repr::Abelian(f) => GroupElement::new(
                a.coords
                    .iter()
                    .zip(&b.coords)
                    .zip(f)
                    .map(|((&x, &y), &m)| (x + y) % m)
                    .collect(),
            ),
            Repr::Generic(t) => GroupElement::new(vec![
                t.mul[a.coords[0] as usize * t.n + b.coords[0] as usize] as u64,
            ]),
            Repr::Star(r) => {
                let c = star_op(r, &split(r, a), &split(r, b));
                join(c)
            }
            Repr::RingUnits(r) => {
                let (x, u) = split(r, a);
                let (y, v) = split(r, b);
                join((r.add(&x, &y), r.mul(&u, &v)))
            }
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match &self.repr {
            Repr::Abelian(f) => GroupElement::new(
                a.coords
                    .iter()
                    .zip(f)
                    .map(|(&x, &m)| (m - x) % m)
                    .collect(),
            ),
            Repr::Generic(t) => GroupElement::new(vec![t.inv[a.coords[0] as usize] as u64]),
            Repr::Star(r) => join(star_inverse(r, &split(r, a))),
            Repr::RingUnits(r) => {
                let (x, u) = split(r, a);
                let ui = r.inverse(&u).expect("second component is a unit");
                join((r.neg(&x), ui))
            }
        }
    }

    /// The difference `a · b⁻¹`.
    pub fn diff(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.op(a, &self.inverse(b))
    }

    pub fn pow(&self, a: &GroupElement, mut e: u64) -> GroupElement {
        if let Repr::Abelian(f) = &self.repr {
            return GroupElement::new(
                a.coords
                    .iter()
                    .zip(f)
                    .map(|(&x, &m)| ((x as u128 * e as u128) % m as u128) as u64)
                    .collect(),
            );
        }
        let mut base = a.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.op(&base, &base);
            }
        }
        acc
    }

    /// Dense key in `0..order`; the identity has key 0.
    pub fn key(&self, x: &GroupElement) -> usize {
        match &self.repr {
            Repr::Abelian(f) => mixed_radix(&x.coords, f) as usize,
            Repr::Generic(_) => x.coords[0] as usize,
            Repr::Star(r) => {
                let (a, b) = split(r, x);
                (r.key(&a) + r.size() * r.key(&b)) as usize
            }
            Repr::RingUnits(r) => {
                let (a, u) = split(r, x);
                (r.key(&a) + r.size() * r.unit_rank(r.key(&u))) as usize
            }
        }
    }

    /// Inverse of [`key`](Self::key).
    pub fn element(&self, key: usize) -> GroupElement {
        let key = key as u64;
        match &self.repr {
            Repr::Abelian(f) => {
                let mut k = key;
                GroupElement::new(
                    f.iter()
                        .map(|&m| {
                            let c = k % m;
                            k /= m;
                            c
                        })
                        .collect(),
                )
            }
            Repr::Generic(_) => GroupElement::new(vec![key]),
            Repr::Star(r) => join((r.from_key(key % r.size()), r.from_key(key / r.size()))),
            Repr::RingUnits(r) => join((r.from_key(key % r.size()), r.unit_unrank(key / r.size()))),
        }
    }

    /// All elements in key order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |k| self.element(k))
    }
}

fn mixed_radix(coords: &[u64], radix: &[u64]) -> u64 {
    coords
        .iter()
        .zip(radix)
        .rev()
        .fold(0u64, |acc, (&c, &m)| acc * m + c)
}

fn split(r: &GaloisRingSpec, x: &GroupElement) -> (RingElement, RingElement) {
    let d = r.degree();
    (
        RingElement::new(x.coords[..d].to_vec()),
        RingElement::new(x.coords[d..].to_vec()),
    )
}

fn join(pair: (RingElement, RingElement)) -> GroupElement {
    let mut v = pair.0.coeffs;
    v.extend(pair.1.coeffs);
    GroupElement::new(v)
}

/// Parses `C<n>` terms joined by `x`, with optional `^<r>` repetition.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    parse_group_spec_with_max(text, DEFAULT_MAX_ORDER)
}

pub fn parse_group_spec_with_max(text: &str, max_order: u64) -> Result<GroupSpec> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::Parse("empty group descriptor".into()));
    }
    let mut factors = Vec::new();
    let mut order: u128 = 1;
    for term in text.split('x') {
        let body = term
            .strip_prefix('C')
            .ok_or_else(|| Error::Parse(format!("term `{term}` must start with C")))?;
        let (base, rep) = match body.split_once('^') {
            Some((b, r)) => (b, r),
            None => (body, "1"),
        };
        let n: u64 = parse_int(base, term)?;
        let r: u32 = parse_int(rep, term)?;
        if n == 0 {
            return Err(Error::Parse(format!("term `{term}` has order 0")));
        }
        for _ in 0..r {
            order = order.saturating_mul(n as u128);
            if order > max_order as u128 {
                return Err(Error::Overflow {
                    order,
                    max: max_order as usize,
                });
            }
            if n > 1 {
                factors.push(n);
            }
        }
    }
    GroupSpec::canonical_abelian(&factors)
}

fn parse_int<T: std::str::FromStr>(s: &str, term: &str) -> Result<T> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed term `{term}`")));
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("number out of range in `{term}`")))
}

/// Smallest `n >= 1` with `x^n` the identity.
pub fn element_order(g: &GroupSpec, x: &GroupElement) -> u64 {
    if let Some(f) = g.factors() {
        return x
            .coords
            .iter()
            .zip(f)
            .fold(1u64, |acc, (&c, &m)| lcm(acc, m / gcd(c, m)));
    }
    let id = g.identity();
    let mut e = g.order();
    for (p, _) in factorize(e) {
        while e % p == 0 && g.pow(x, e / p) == id {
            e /= p;
        }
    }
    e
}

/// Number of elements of order two.
pub fn count_involutions(g: &GroupSpec) -> u64 {
    if let Some(f) = g.factors() {
        let even = f.iter().filter(|&&m| m % 2 == 0).count() as u32;
        return (1u64 << even) - 1;
    }
    g.elements().filter(|x| element_order(g, x) == 2).count() as u64
}

/// Count of elements by order.
pub fn order_census(g: &GroupSpec) -> BTreeMap<u64, u64> {
    if let Some(f) = g.factors() {
        return abelian_order_census(f);
    }
    let mut out = BTreeMap::new();
    for x in g.elements() {
        *out.entry(element_order(g, &x)).or_insert(0) += 1;
    }
    out
}

fn abelian_order_census(factors: &[u64]) -> BTreeMap<u64, u64> {
    let exponent = factors.iter().fold(1, |a, &m| lcm(a, m));
    let mut exact: BTreeMap<u64, u64> = BTreeMap::new();
    for d in divisors(exponent) {
        let dividing: u64 = factors.iter().map(|&m| gcd(d, m)).product();
        let smaller: u64 = exact
            .iter()
            .filter(|(&e, _)| d % e == 0)
            .map(|(_, &c)| c)
            .sum();
        exact.insert(d, dividing - smaller);
    }
    exact.retain(|_, c| *c > 0);
    exact
}

/// Recovers the canonical abelian structure from an order census: for each
/// prime `p`, the number of elements of order dividing `p^j` is `p^{s_j}` and
/// `s_j - s_{j-1}` counts the cyclic factors of exponent at least `j`.
pub fn structure_from_order_census(census: &BTreeMap<u64, u64>) -> Result<GroupSpec> {
    let n: u64 = census.values().sum();
    let mut factors = Vec::new();
    for (p, _) in factorize(n) {
        let mut s_prev = 0u32;
        let mut counts = Vec::new();
        let mut pj = 1u64;
        loop {
            pj *= p;
            let dividing: u64 = census
                .iter()
                .filter(|(&d, _)| pj % d == 0)
                .map(|(_, &c)| c)
                .sum();
            let s = exact_log(dividing, p).ok_or_else(|| {
                Error::CensusMismatch(format!(
                    "{dividing} elements of order dividing {pj} is not a power of {p}"
                ))
            })?;
            if s == s_prev {
                break;
            }
            counts.push(s - s_prev);
            s_prev = s;
        }
        for j in 0..counts.len() {
            let at_least = counts[j];
            let next = counts.get(j + 1).copied().unwrap_or(0);
            if next > at_least {
                return Err(Error::CensusMismatch("inconsistent p-rank profile".into()));
            }
            for _ in 0..at_least - next {
                factors.push(p.pow(j as u32 + 1));
            }
        }
    }
    let spec = GroupSpec::canonical_abelian(&factors)?;
    if order_census(&spec) != *census {
        return Err(Error::CensusMismatch(
            "census is not that of an abelian group".into(),
        ));
    }
    Ok(spec)
}

fn exact_log(mut n: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if n % p != 0 {
            return None;
        }
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}

/// Materializes the Cayley table, indices following element keys.
pub fn cayley_table(g: &GroupSpec) -> Result<GroupSpec> {
    cayley_table_with_max(g, DEFAULT_MAX_ORDER)
}

pub fn cayley_table_with_max(g: &GroupSpec, max_order: u64) -> Result<GroupSpec> {
    if g.order() > max_order || g.order() > u32::MAX as u64 {
        return Err(Error::Overflow {
            order: g.order() as u128,
            max: max_order as usize,
        });
    }
    if g.kind() == GroupKind::Generic {
        return Ok(g.clone());
    }
    let n = g.order() as usize;
    let elems: Vec<GroupElement> = g.elements().collect();
    let mut mul = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            mul.push(g.key(&g.op(a, b)) as u32);
        }
    }
    Ok(GroupSpec::from_table_unchecked(n, mul))
}

/// Explicit isomorphism between a commutative group and its canonical
/// abelian form: canonical coordinates `c` correspond to `∏ g_i^{c_i}`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub source: GroupSpec,
    pub spec: GroupSpec,
    pub generators: Vec<GroupElement>,
    to_canonical: Vec<u32>,
}

impl Decomposition {
    /// The source element with the given canonical coordinates.
    pub fn from_canonical(&self, x: &GroupElement) -> GroupElement {
        let mut acc = self.source.identity();
        for (g, &c) in self.generators.iter().zip(&x.coords) {
            acc = self.source.op(&acc, &self.source.pow(g, c));
        }
        acc
    }

    /// Canonical coordinates of a source element.
    pub fn to_canonical(&self, x: &GroupElement) -> GroupElement {
        self.spec
            .element(self.to_canonical[self.source.key(x)] as usize)
    }
}

/// Canonical abelian structure of a commutative group.
pub fn abelian_basis_decomposition(g: &GroupSpec) -> Result<GroupSpec> {
    Ok(decompose(g)?.spec)
}

/// Basis decomposition by greedy extension inside each Sylow subgroup: pick
/// an element of largest order modulo the span so far, correct it by the
/// span so that its order drops to its quotient order, and adjoin it.
pub fn decompose(g: &GroupSpec) -> Result<Decomposition> {
    if !g.is_commutative() {
        return Err(Error::NonCommutative);
    }
    if g.order() > DEFAULT_MAX_ORDER {
        return Err(Error::Overflow {
            order: g.order() as u128,
            max: DEFAULT_MAX_ORDER as usize,
        });
    }
    let n = g.order() as usize;
    let elems: Vec<GroupElement> = g.elements().collect();
    let orders: Vec<u64> = elems.iter().map(|x| element_order(g, x)).collect();
    let mut gens: Vec<(u64, u64, GroupElement)> = Vec::new();
    for (p, _) in factorize(g.order()) {
        let sylow: Vec<usize> = (0..n)
            .filter(|&i| exact_log(orders[i], p).is_some())
            .collect();
        // span: key -> coefficients relative to the generators chosen so far
        let mut span: HashMap<usize, Vec<u64>> = HashMap::from([(0usize, vec![])]);
        let mut local: Vec<(u64, GroupElement)> = Vec::new();
        while span.len() < sylow.len() {
            let mut best: Option<(u64, usize)> = None;
            for &i in &sylow {
                let mut e = 1u64;
                let mut y = elems[i].clone();
                while !span.contains_key(&g.key(&y)) {
                    y = g.pow(&y, p);
                    e *= p;
                }
                if best.is_none_or(|(be, _)| e > be) {
                    best = Some((e, i));
                }
            }
            let (e, i) = best.expect("sylow subgroup is nonempty");
            let x = &elems[i];
            let coeffs = span[&g.key(&g.pow(x, e))].clone();
            let mut corrected = x.clone();
            for ((_, gen), &c) in local.iter().zip(&coeffs) {
                if c % e != 0 {
                    return Err(Error::Internal("basis extension failed".into()));
                }
                let back = g.inverse(&g.pow(gen, c / e));
                corrected = g.op(&corrected, &back);
            }
            if element_order(g, &corrected) != e {
                return Err(Error::Internal("corrected element has wrong order".into()));
            }
            let mut next = HashMap::with_capacity(span.len() * e as usize);
            for (key, coeffs) in &span {
                let mut y = elems[*key].clone();
                for t in 0..e {
                    let mut c = coeffs.clone();
                    c.push(t);
                    next.insert(g.key(&y), c);
                    y = g.op(&y, &corrected);
                }
            }
            span = next;
            local.push((e, corrected));
        }
        for (e, gen) in local {
            gens.push((p, e, gen));
        }
    }
    gens.sort_by_key(|(p, e, _)| (*p, *e));
    let spec = GroupSpec::abelian(gens.iter().map(|(_, e, _)| *e).collect())?;
    let generators: Vec<GroupElement> = gens.into_iter().map(|(_, _, x)| x).collect();
    let mut to_canonical = vec![u32::MAX; n];
    let mut dec = Decomposition {
        source: g.clone(),
        spec: spec.clone(),
        generators,
        to_canonical: Vec::new(),
    };
    for (ck, c) in spec.elements().enumerate() {
        let x = dec.from_canonical(&c);
        to_canonical[g.key(&x)] = ck as u32;
    }
    if to_canonical.contains(&u32::MAX) {
        return Err(Error::Internal("decomposition is not surjective".into()));
    }
    dec.to_canonical = to_canonical;
    Ok(dec)
}

/// All abelian groups of order `n` in canonical form, sorted by factor list.
pub fn abelian_groups_of_order(n: u64) -> Vec<GroupSpec> {
    let mut acc: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for part in partitions(e) {
            let mut fs: Vec<u64> = part.iter().map(|&k| p.pow(k)).collect();
            fs.sort();
            for prefix in &acc {
                let mut v = prefix.clone();
                v.extend(&fs);
                next.push(v);
            }
        }
        acc = next;
    }
    let mut out: Vec<GroupSpec> = acc
        .into_iter()
        .map(|f| GroupSpec::abelian(f).expect("valid"))
        .collect();
    out.sort_by(|a, b| a.factors().cmp(&b.factors()));
    out
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// An injective homomorphism from an abelian group into an abelian group
/// sending generator `j` to `scale_j` times generator `coord_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub sub: GroupSpec,
    pub ambient: GroupSpec,
    pub map: Vec<(usize, u64)>,
}

impl Embedding {
    pub fn new(sub: GroupSpec, ambient: GroupSpec, map: Vec<(usize, u64)>) -> Result<Self> {
        let (sf, af) = match (sub.factors(), ambient.factors()) {
            (Some(s), Some(a)) => (s, a),
            _ => return Err(Error::Precondition("embeddings need abelian groups".into())),
        };
        if sf.len() != map.len() {
            return Err(Error::Precondition("one image per sub coordinate".into()));
        }
        let mut used = vec![false; af.len()];
        for (&(i, scale), &s) in map.iter().zip(sf) {
            if i >= af.len() || used[i] || s.checked_mul(scale) != Some(af[i]) {
                return Err(Error::Precondition(format!(
                    "coordinate image ({i}, {scale}) is not a cyclic embedding"
                )));
            }
            used[i] = true;
        }
        Ok(Embedding { sub, ambient, map })
    }

    /// Permutes coordinates: sub coordinate `j` goes to ambient `perm[j]`.
    pub fn permutation(sub: GroupSpec, ambient: GroupSpec, perm: &[usize]) -> Result<Self> {
        let map = perm.iter().map(|&i| (i, 1)).collect();
        Embedding::new(sub, ambient, map)
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let af = self.ambient.factors().expect("abelian");
        let mut v = vec![0u64; af.len()];
        for (&(i, scale), &c) in self.map.iter().zip(&x.coords) {
            v[i] = (v[i] + c * scale) % af[i];
        }
        GroupElement::new(v)
    }

    pub fn compose(&self, outer: &Embedding) -> Result<Embedding> {
        if self.ambient != outer.sub {
            return Err(Error::GroupMismatch);
        }
        let map = self
            .map
            .iter()
            .map(|&(i, s)| {
                let (j, t) = outer.map[i];
                (j, s * t)
            })
            .collect();
        Embedding::new(self.sub.clone(), outer.ambient.clone(), map)
    }
}

/// Per-coordinate rule of a coordinate reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordRule {
    Drop,
    Reduce(u64),
}

/// Surjective homomorphism of abelian groups that reduces some coordinates
/// modulo a divisor of their factor and drops the others.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub kernel: GroupSpec,
    pub rules: Vec<CoordRule>,
    target_coords: Vec<usize>,
    kernel_map: Vec<(usize, u64)>,
}

impl Homomorphism {
    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let tf = self.target.factors().expect("abelian");
        GroupElement::new(
            self.target_coords
                .iter()
                .zip(tf)
                .map(|(&i, &m)| x.coords[i] % m)
                .collect(),
        )
    }

    /// Canonical lift of a target element: residues copied, other coordinates zero.
    pub fn section(&self, t: &GroupElement) -> GroupElement {
        let mut v = vec![0u64; self.source.arity()];
        for (&i, &c) in self.target_coords.iter().zip(&t.coords) {
            v[i] = c;
        }
        GroupElement::new(v)
    }

    pub fn kernel_embedding(&self) -> Embedding {
        Embedding {
            sub: self.kernel.clone(),
            ambient: self.source.clone(),
            map: self.kernel_map.clone(),
        }
    }

    pub fn in_kernel(&self, x: &GroupElement) -> bool {
        self.apply(x).coords.iter().all(|&c| c == 0)
    }
}

/// Homomorphism reducing coordinate `i` mod `m` for each `(i, m)` in `rules`
/// (in that order in the target) and dropping every unlisted coordinate.
pub fn reduction(source: &GroupSpec, rules: &[(usize, u64)]) -> Result<Homomorphism> {
    let f = source
        .factors()
        .ok_or_else(|| Error::InvalidProjection("source must be abelian".into()))?;
    let mut per = vec![CoordRule::Drop; f.len()];
    let mut target_coords = Vec::new();
    let mut target_factors = Vec::new();
    for &(i, m) in rules {
        if i >= f.len() {
            return Err(Error::InvalidProjection(format!("no coordinate {i}")));
        }
        if per[i] != CoordRule::Drop {
            return Err(Error::InvalidProjection(format!("coordinate {i} repeated")));
        }
        if m < 2 || f[i] % m != 0 {
            return Err(Error::InvalidProjection(format!(
                "{m} does not divide the factor {} of coordinate {i}",
                f[i]
            )));
        }
        per[i] = CoordRule::Reduce(m);
        target_coords.push(i);
        target_factors.push(m);
    }
    let mut kernel_factors = Vec::new();
    let mut kernel_map = Vec::new();
    for (i, rule) in per.iter().enumerate() {
        let (size, scale) = match *rule {
            CoordRule::Drop => (f[i], 1),
            CoordRule::Reduce(m) => (f[i] / m, m),
        };
        if size > 1 {
            kernel_factors.push(size);
            kernel_map.push((i, scale));
        }
    }
    Ok(Homomorphism {
        source: source.clone(),
        target: GroupSpec::abelian(target_factors)?,
        kernel: GroupSpec::abelian(kernel_factors)?,
        rules: per,
        target_coords,
        kernel_map,
    })
}

/// Reduction of the selected coordinates mod `p^k`, all sharing the prime
/// `p`; unselected coordinates go to the kernel.
pub fn canonical_projection(g: &GroupSpec, coords: &[usize], k: u32) -> Result<Homomorphism> {
    let f = g
        .factors()
        .ok_or_else(|| Error::InvalidProjection("group must be abelian".into()))?;
    if k == 0 {
        return Err(Error::InvalidProjection("k must be positive".into()));
    }
    let mut prime = None;
    for &i in coords {
        let m = *f
            .get(i)
            .ok_or_else(|| Error::InvalidProjection(format!("no coordinate {i}")))?;
        let (p, e) = crate::arith::prime_power(m).ok_or_else(|| {
            Error::InvalidProjection(format!("factor {m} is not a prime power"))
        })?;
        if *prime.get_or_insert(p) != p {
            return Err(Error::InvalidProjection("selected factors mix primes".into()));
        }
        if e < k {
            return Err(Error::InvalidProjection(format!(
                "k = {k} exceeds the exponent of factor {m}"
            )));
        }
    }
    let rules: Vec<(usize, u64)> = match prime {
        Some(p) => coords.iter().map(|&i| (i, p.pow(k))).collect(),
        None => vec![],
    };
    reduction(g, &rules)
}
