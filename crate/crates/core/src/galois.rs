//! Galois rings `GR(p^k, r) = Z[x]/(p^k, f(x))`, their unit groups and the
//! star group `R⋆R`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};
use crate::group::{abelian_basis_decomposition, structure_from_order_census, GroupSpec};

/// Largest ring cardinality accepted by the constructors.
pub const DEFAULT_RING_MAX: u64 = 1 << 20;

/// Largest number of elements enumerated by a structure census.
pub const DEFAULT_CENSUS_MAX: u64 = 1 << 16;

/// Parameters of a Galois ring. `modulus` holds the coefficients of the monic
/// modulus from the constant term upwards, so it has length `r + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RingJson", into = "RingJson")]
pub struct GaloisRingSpec {
    pub p: u64,
    pub k: u32,
    pub r: u32,
    pub modulus: Vec<u64>,
    q: u64,
    size: u64,
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    p: u64,
    k: u32,
    r: u32,
    modulus: Vec<u64>,
}

impl TryFrom<RingJson> for GaloisRingSpec {
    type Error = Error;
    fn try_from(j: RingJson) -> Result<Self> {
        GaloisRingSpec::with_modulus(j.p, j.k, j.r, j.modulus)
    }
}

impl From<GaloisRingSpec> for RingJson {
    fn from(s: GaloisRingSpec) -> Self {
        RingJson {
            p: s.p,
            k: s.k,
            r: s.r,
            modulus: s.modulus,
        }
    }
}

/// An element of a Galois ring as its coefficient vector, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement {
    pub coeffs: Vec<u64>,
}

impl RingElement {
    pub fn new(coeffs: Vec<u64>) -> Self {
        RingElement { coeffs }
    }
}

fn ring_size(p: u64, k: u32, r: u32) -> Option<u64> {
    p.checked_pow(k)?.checked_pow(r)
}

impl GaloisRingSpec {
    /// `GR(p^k, r)` with the deterministic modulus from [`find_basic_irreducible`].
    pub fn new(p: u64, k: u32, r: u32) -> Result<Self> {
        Self::new_with_max(p, k, r, DEFAULT_RING_MAX)
    }

    pub fn new_with_max(p: u64, k: u32, r: u32, max: u64) -> Result<Self> {
        check_params(p, k, r, max)?;
        let modulus = find_basic_irreducible(p, r);
        Self::with_modulus(p, k, r, modulus)
    }

    /// Builds a ring from an explicit monic modulus, checking irreducibility mod `p`.
    pub fn with_modulus(p: u64, k: u32, r: u32, modulus: Vec<u64>) -> Result<Self> {
        check_params(p, k, r, u64::MAX)?;
        let q = p.pow(k);
        if modulus.len() != r as usize + 1 || modulus[r as usize] != 1 {
            return Err(Error::Precondition(format!(
                "modulus must be monic of degree {r}"
            )));
        }
        if modulus.iter().any(|&c| c >= q) {
            return Err(Error::Precondition("modulus coefficient out of range".into()));
        }
        let reduced: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        if !is_irreducible_mod_p(&reduced, p) {
            return Err(Error::Precondition(format!(
                "modulus {modulus:?} is not irreducible mod {p}"
            )));
        }
        let size = ring_size(p, k, r).expect("checked above");
        Ok(GaloisRingSpec {
            p,
            k,
            r,
            modulus,
            q,
            size,
        })
    }

    /// The characteristic `p^k`.
    pub fn char_modulus(&self) -> u64 {
        self.q
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn residue_field_size(&self) -> u64 {
        self.p.pow(self.r)
    }

    pub fn unit_count(&self) -> u64 {
        self.size - (self.q / self.p).pow(self.r)
    }

    pub fn degree(&self) -> usize {
        self.r as usize
    }

    pub fn zero(&self) -> RingElement {
        RingElement::new(vec![0; self.degree()])
    }

    pub fn one(&self) -> RingElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> RingElement {
        let mut v = vec![0; self.degree()];
        v[0] = c % self.q;
        RingElement::new(v)
    }

    pub fn contains(&self, a: &RingElement) -> bool {
        a.coeffs.len() == self.degree() && a.coeffs.iter().all(|&c| c < self.q)
    }

    /// Mixed-radix key, constant coefficient least significant.
    pub fn key(&self, a: &RingElement) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q + c)
    }

    pub fn from_key(&self, mut key: u64) -> RingElement {
        let mut v = Vec::with_capacity(self.degree());
        for _ in 0..self.r {
            v.push(key % self.q);
            key /= self.q;
        }
        RingElement::new(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.size).map(move |k| self.from_key(k))
    }

    pub fn units(&self) -> impl Iterator<Item = RingElement> + '_ {
        self.elements().filter(move |a| self.is_unit(a))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement::new(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.q)
                .collect(),
        )
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement::new(a.coeffs.iter().map(|&x| (self.q - x) % self.q).collect())
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, s: u64, a: &RingElement) -> RingElement {
        let s = s % self.q;
        RingElement::new(a.coeffs.iter().map(|&x| x * s % self.q).collect())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        ring_mul(self, a, b)
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Units are exactly the elements outside the maximal ideal `pR`.
    pub fn is_unit(&self, a: &RingElement) -> bool {
        a.coeffs.iter().any(|&c| c % self.p != 0)
    }

    pub fn inverse(&self, a: &RingElement) -> Result<RingElement> {
        ring_inverse(self, a)
    }

    /// Multiplicative order of a unit.
    pub fn multiplicative_order(&self, a: &RingElement) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let one = self.one();
        let mut e = self.unit_count();
        for (l, _) in factorize(e) {
            while e % l == 0 && self.pow(a, e / l) == one {
                e /= l;
            }
        }
        Ok(e)
    }

    /// Number of units with key below `key`. Used to give units dense indices.
    pub fn unit_rank(&self, key: u64) -> u64 {
        let m = self.q / self.p;
        let mut below = 0u64;
        let digits = self.from_key(key).coeffs;
        let mut weight = m.pow(self.r);
        for &c in digits.iter().rev() {
            weight /= m;
            below += c.div_ceil(self.p) * weight;
            if c % self.p != 0 {
                return key - below;
            }
        }
        key - below
    }

    /// Inverse of [`unit_rank`](Self::unit_rank) restricted to units.
    pub fn unit_unrank(&self, index: u64) -> RingElement {
        let (mut lo, mut hi) = (0u64, self.size - 1);
        // smallest key whose rank exceeds `index`, minus one, is the unit
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.unit_rank(mid + 1) > index {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        self.from_key(lo)
    }
}

fn check_params(p: u64, k: u32, r: u32, max: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if k == 0 || r == 0 {
        return Err(Error::Precondition("k and r must be at least 1".into()));
    }
    match ring_size(p, k, r) {
        Some(s) if s <= max => Ok(()),
        Some(s) => Err(Error::Limit {
            what: "ring size",
            value: s as u128,
            max: max as usize,
        }),
        None => Err(Error::Limit {
            what: "ring size",
            value: u128::MAX,
            max: max as usize,
        }),
    }
}

/// Remainder of `f` modulo the monic `g`, coefficients mod `p`, constant first.
fn poly_rem_mod_p(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut f: Vec<u64> = f.iter().map(|&c| c % p).collect();
    let dg = g.len() - 1;
    while f.len() > dg {
        let lead = f.pop().expect("nonempty");
        if lead != 0 {
            let shift = f.len() - dg;
            for (i, &gc) in g[..dg].iter().enumerate() {
                let idx = shift + i;
                f[idx] = (f[idx] + (p - lead) * gc % p) % p;
            }
        }
    }
    f
}

/// Irreducibility over `F_p` by trial division by all monic polynomials of
/// degree at most `deg / 2`.
pub fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let deg = match f.iter().rposition(|&c| c % p != 0) {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    let f = &f[..=deg];
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = low;
            for _ in 0..d {
                g.push(t % p);
                t /= p;
            }
            g.push(1);
            if poly_rem_mod_p(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The smallest monic polynomial of degree `r` irreducible mod `p`, ordered by
/// the coefficient tuple `(c_{r-1}, ..., c_0)`. Constant term first.
pub fn find_basic_irreducible(p: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    let count = p.pow(r as u32);
    // treating c_{r-1} as the most significant digit makes numeric order lexicographic
    for n in 0..count {
        let mut f = Vec::with_capacity(r + 1);
        let mut t = n;
        for _ in 0..r {
            f.push(t % p);
            t /= p;
        }
        f.push(1);
        if is_irreducible_mod_p(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn ring_mul(ring: &GaloisRingSpec, a: &RingElement, b: &RingElement) -> RingElement {
    let r = ring.degree();
    let q = ring.q;
    let mut prod = vec![0u64; 2 * r - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % q;
        }
    }
    for top in (r..prod.len()).rev() {
        let lead = prod[top];
        if lead == 0 {
            continue;
        }
        prod[top] = 0;
        // x^r = -(c_0 + ... + c_{r-1} x^{r-1})
        for (i, &c) in ring.modulus[..r].iter().enumerate() {
            let idx = top - r + i;
            prod[idx] = (prod[idx] + (q - lead) * c % q) % q;
        }
    }
    prod.truncate(r);
    RingElement::new(prod)
}

/// Inverse of a unit: residue-field inverse by exponentiation, then Newton
/// steps `b <- b(2 - ab)` which double the p-adic precision.
pub fn ring_inverse(ring: &GaloisRingSpec, a: &RingElement) -> Result<RingElement> {
    if !ring.is_unit(a) {
        return Err(Error::NonUnit);
    }
    let one = ring.one();
    let two = ring.constant(2);
    let mut b = ring.pow(a, ring.residue_field_size() - 2);
    for _ in 0..=ring.k {
        if ring.mul(a, &b) == one {
            return Ok(b);
        }
        let ab = ring.mul(a, &b);
        b = ring.mul(&b, &ring.sub(&two, &ab));
    }
    if ring.mul(a, &b) == one {
        Ok(b)
    } else {
        Err(Error::Internal("Newton refinement did not converge".into()))
    }
}

/// The unit group structure predicted by the structure theorem, canonical form.
pub fn unit_group_claimed(ring: &GaloisRingSpec) -> GroupSpec {
    let (p, k, r) = (ring.p, ring.k, ring.r);
    let mut factors = vec![p.pow(r) - 1];
    if p != 2 || k <= 2 {
        factors.extend(std::iter::repeat_n(p.pow(k - 1), r as usize));
    } else {
        factors.push(2);
        factors.push(1 << (k - 2));
        factors.extend(std::iter::repeat_n(1u64 << (k - 1), r as usize - 1));
    }
    GroupSpec::canonical_abelian(&factors).expect("positive factors")
}

/// Count of units by multiplicative order.
pub fn unit_order_census(ring: &GaloisRingSpec) -> Result<BTreeMap<u64, u64>> {
    let mut census = BTreeMap::new();
    for a in ring.units() {
        *census.entry(ring.multiplicative_order(&a)?).or_insert(0) += 1;
    }
    Ok(census)
}

/// Unit group structure, census-verified when the ring is small enough.
pub fn unit_group_spec(ring: &GaloisRingSpec) -> Result<GroupSpec> {
    unit_group_spec_with_max(ring, DEFAULT_CENSUS_MAX)
}

pub fn unit_group_spec_with_max(ring: &GaloisRingSpec, census_max: u64) -> Result<GroupSpec> {
    let claimed = unit_group_claimed(ring);
    if ring.size() <= census_max {
        let observed = structure_from_order_census(&unit_order_census(ring)?)?;
        if observed != claimed {
            return Err(Error::CensusMismatch(format!(
                "unit group of {}: claimed {}, observed {}",
                ring_label(ring),
                claimed.descriptor(),
                observed.descriptor()
            )));
        }
    }
    Ok(claimed)
}

pub fn ring_label(ring: &GaloisRingSpec) -> String {
    format!("GR({}^{},{})", ring.p, ring.k, ring.r)
}

/// Star-group structure predicted by the structure theorem, canonical form.
pub fn star_claimed(ring: &GaloisRingSpec) -> GroupSpec {
    let (p, k, r) = (ring.p, ring.k, ring.r as usize);
    let mut factors = Vec::new();
    if p == 2 {
        factors.extend(std::iter::repeat_n(1u64 << (k + 1), r));
        factors.extend(std::iter::repeat_n(1u64 << (k - 1), r));
    } else {
        factors.extend(std::iter::repeat_n(p.pow(k), 2 * r));
    }
    GroupSpec::canonical_abelian(&factors).expect("positive factors")
}

pub fn star_op(
    ring: &GaloisRingSpec,
    a: &(RingElement, RingElement),
    b: &(RingElement, RingElement),
) -> (RingElement, RingElement) {
    let x = ring.add(&a.0, &b.0);
    let y = ring.add(&ring.add(&a.1, &b.1), &ring.mul(&a.0, &b.0));
    (x, y)
}

pub fn star_inverse(
    ring: &GaloisRingSpec,
    a: &(RingElement, RingElement),
) -> (RingElement, RingElement) {
    let x2 = ring.mul(&a.0, &a.0);
    (ring.neg(&a.0), ring.add(&ring.neg(&a.1), &x2))
}

/// `(x,y)^s = (sx, sy + s(s-1)/2 x^2)` with the binomial coefficient formed exactly.
pub fn star_pow(
    ring: &GaloisRingSpec,
    a: &(RingElement, RingElement),
    s: u64,
) -> (RingElement, RingElement) {
    let s128 = s as u128;
    let half = (s128 * s128.saturating_sub(1) / 2 % ring.char_modulus() as u128) as u64;
    let x2 = ring.mul(&a.0, &a.0);
    (
        ring.scale(s, &a.0),
        ring.add(&ring.scale(s, &a.1), &ring.scale(half, &x2)),
    )
}

/// Order census of `R⋆R`, computed by iterated multiplication and checked
/// against the closed power formula at every step.
pub fn star_power_census(ring: &GaloisRingSpec) -> Result<BTreeMap<u64, u64>> {
    star_power_census_with_max(ring, DEFAULT_CENSUS_MAX)
}

pub fn star_power_census_with_max(
    ring: &GaloisRingSpec,
    census_max: u64,
) -> Result<BTreeMap<u64, u64>> {
    let n = ring.size() as u128 * ring.size() as u128;
    if n > census_max as u128 {
        return Err(Error::Limit {
            what: "star group order",
            value: n,
            max: census_max as usize,
        });
    }
    let zero = (ring.zero(), ring.zero());
    let mut census = BTreeMap::new();
    for x in ring.elements() {
        for y in ring.elements() {
            let a = (x.clone(), y);
            let mut acc = a.clone();
            let mut s = 1u64;
            while acc != zero {
                s += 1;
                acc = star_op(ring, &acc, &a);
                if acc != star_pow(ring, &a, s) {
                    return Err(Error::Internal(format!(
                        "power formula disagrees with iteration at s = {s}"
                    )));
                }
            }
            if star_pow(ring, &a, s) != zero {
                return Err(Error::Internal("power formula order mismatch".into()));
            }
            *census.entry(s).or_insert(0) += 1;
        }
    }
    Ok(census)
}

/// The star group of a ring together with its claimed and observed structure.
#[derive(Clone, Debug)]
pub struct StarGroup {
    pub group: GroupSpec,
    pub claimed: GroupSpec,
    pub observed: Option<GroupSpec>,
    pub verified: bool,
}

/// Builds `R⋆R`. When it fits the census bound its basis decomposition is
/// computed and compared with the claimed structure.
pub fn star_group(ring: &GaloisRingSpec) -> Result<StarGroup> {
    star_group_with_max(ring, DEFAULT_CENSUS_MAX)
}

pub fn star_group_with_max(ring: &GaloisRingSpec, census_max: u64) -> Result<StarGroup> {
    let group = GroupSpec::star(ring.clone());
    let claimed = star_claimed(ring);
    if (group.order() as u128) > census_max as u128 {
        return Ok(StarGroup {
            group,
            claimed,
            observed: None,
            verified: false,
        });
    }
    let observed = abelian_basis_decomposition(&group)?;
    if observed != claimed {
        return Err(Error::CensusMismatch(format!(
            "star group of {}: claimed {}, observed {}",
            ring_label(ring),
            claimed.descriptor(),
            observed.descriptor()
        )));
    }
    Ok(StarGroup {
        group,
        claimed,
        observed: Some(observed),
        verified: true,
    })
}

/// Claimed against observed structure of `U(R)` and `R⋆R`.
#[derive(Clone, Debug, Serialize)]
pub struct RingCheckReport {
    pub ring: GaloisRingSpec,
    pub unit_claimed: String,
    pub unit_observed: Option<String>,
    pub unit_match: Option<bool>,
    pub star_claimed: String,
    pub star_observed: Option<String>,
    pub star_match: Option<bool>,
}

impl RingCheckReport {
    /// True when every structure that was observed matches its claim.
    pub fn all_match(&self) -> bool {
        self.unit_match != Some(false) && self.star_match != Some(false)
    }
}

pub fn ring_check(ring: &GaloisRingSpec, census_max: u64) -> Result<RingCheckReport> {
    let unit_claimed = unit_group_claimed(ring);
    let unit_observed = if ring.size() <= census_max {
        Some(structure_from_order_census(&unit_order_census(ring)?)?)
    } else {
        None
    };
    let star = GroupSpec::star(ring.clone());
    let star_claimed_spec = star_claimed(ring);
    let star_observed = if (star.order() as u128) <= census_max as u128 {
        Some(abelian_basis_decomposition(&star)?)
    } else {
        None
    };
    Ok(RingCheckReport {
        ring: ring.clone(),
        unit_match: unit_observed.as_ref().map(|o| *o == unit_claimed),
        unit_claimed: unit_claimed.descriptor(),
        unit_observed: unit_observed.map(|o| o.descriptor()),
        star_match: star_observed.as_ref().map(|o| *o == star_claimed_spec),
        star_claimed: star_claimed_spec.descriptor(),
        star_observed: star_observed.map(|o| o.descriptor()),
    })
}

/// All `(p, k, r)` with `p^{kr} <= max`.
pub fn ring_parameters_up_to(max: u64) -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for p in 2..=max {
        if !is_prime(p) {
            continue;
        }
        for k in 1.. {
            if p.pow(k) > max {
                break;
            }
            for r in 1.. {
                match ring_size(p, k, r) {
                    Some(s) if s <= max => out.push((p, k, r)),
                    _ => break,
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(v: &[u64]) -> RingElement {
        RingElement::new(v.to_vec())
    }

    #[test]
    fn basic_irreducibles() {
        assert_eq!(find_basic_irreducible(2, 1), vec![0, 1]);
        assert_eq!(find_basic_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(find_basic_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn irreducible_quadratics_mod_3_by_root_test() {
        // a monic quadratic is irreducible iff it has no root
        let mut first = None;
        for c1 in 0..3u64 {
            for c0 in 0..3u64 {
                let rootless = (0..3u64).all(|x| (x * x + c1 * x + c0) % 3 != 0);
                assert_eq!(rootless, is_irreducible_mod_p(&[c0, c1, 1], 3));
                if rootless && first.is_none() {
                    first = Some(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(first.unwrap(), find_basic_irreducible(3, 2));
    }

    #[test]
    fn multiplication_examples() {
        let z8 = GaloisRingSpec::new(2, 3, 1).unwrap();
        assert_eq!(z8.mul(&el(&[3]), &el(&[5])), el(&[7]));
        let r = GaloisRingSpec::new(3, 1, 2).unwrap();
        assert_eq!(r.mul(&el(&[0, 1]), &el(&[0, 1])), el(&[2, 0]));
        for a in r.elements() {
            assert_eq!(r.mul(&a, &r.one()), a);
        }
    }

    #[test]
    fn inverse_examples() {
        let z9 = GaloisRingSpec::new(3, 2, 1).unwrap();
        assert_eq!(z9.inverse(&el(&[2])).unwrap(), el(&[5]));
        assert!(matches!(z9.inverse(&el(&[3])), Err(Error::NonUnit)));
        let r = GaloisRingSpec::new(2, 2, 2).unwrap();
        let x = el(&[0, 1]);
        let inv = r.inverse(&x).unwrap();
        let brute: Vec<_> = r.elements().filter(|b| r.mul(&x, b) == r.one()).collect();
        assert_eq!(brute, vec![inv]);
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        for (p, k, r) in ring_parameters_up_to(27) {
            let ring = GaloisRingSpec::new(p, k, r).unwrap();
            let all: Vec<_> = ring.elements().collect();
            for a in &all {
                for b in &all {
                    let ab = ring.mul(a, b);
                    assert_eq!(ab, ring.mul(b, a));
                    for c in &all {
                        assert_eq!(ring.mul(&ab, c), ring.mul(a, &ring.mul(b, c)));
                        assert_eq!(
                            ring.mul(a, &ring.add(b, c)),
                            ring.add(&ab, &ring.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn units_are_exactly_the_invertible_elements() {
        for (p, k, r) in ring_parameters_up_to(625) {
            let ring = GaloisRingSpec::new(p, k, r).unwrap();
            let mut units = 0;
            for a in ring.elements() {
                match ring.inverse(&a) {
                    Ok(b) => {
                        assert!(ring.is_unit(&a));
                        assert_eq!(ring.mul(&a, &b), ring.one());
                        units += 1;
                    }
                    Err(_) => assert!(!ring.is_unit(&a)),
                }
            }
            assert_eq!(units, ring.unit_count());
            let pk = p.pow(k);
            assert_eq!(ring.unit_count(), pk.pow(r) - (pk / p).pow(r));
        }
    }

    #[test]
    fn unit_ranks_are_dense() {
        for (p, k, r) in ring_parameters_up_to(81) {
            let ring = GaloisRingSpec::new(p, k, r).unwrap();
            let mut idx = 0;
            for a in ring.elements() {
                let key = ring.key(&a);
                assert_eq!(ring.unit_rank(key), idx);
                if ring.is_unit(&a) {
                    assert_eq!(ring.unit_unrank(idx), a);
                    idx += 1;
                }
            }
        }
    }

    #[test]
    fn unit_group_examples() {
        let z9 = GaloisRingSpec::new(3, 2, 1).unwrap();
        assert_eq!(unit_group_spec(&z9).unwrap().factors().unwrap(), &[2, 3]);
        let z8 = GaloisRingSpec::new(2, 3, 1).unwrap();
        assert_eq!(unit_group_spec(&z8).unwrap().factors().unwrap(), &[2, 2]);
        let f8 = GaloisRingSpec::new(2, 1, 3).unwrap();
        assert_eq!(unit_group_spec(&f8).unwrap().factors().unwrap(), &[7]);
    }

    #[test]
    fn star_census_examples() {
        let r = GaloisRingSpec::new(2, 1, 1).unwrap();
        let c = star_power_census(&r).unwrap();
        assert_eq!(c, BTreeMap::from([(1, 1), (2, 1), (4, 2)]));
        let r = GaloisRingSpec::new(3, 1, 1).unwrap();
        assert_eq!(
            star_power_census(&r).unwrap(),
            BTreeMap::from([(1, 1), (3, 8)])
        );
        let r = GaloisRingSpec::new(2, 2, 1).unwrap();
        let c = star_power_census(&r).unwrap();
        // 2^{(2k-1)r}(2^r-1) elements of order 2^{k+1}
        assert_eq!(c[&8], 8);
    }

    #[test]
    fn star_group_examples() {
        let r = GaloisRingSpec::new(2, 1, 1).unwrap();
        let s = star_group(&r).unwrap();
        assert_eq!(s.claimed.factors().unwrap(), &[4]);
        assert!(s.verified);
        let r = GaloisRingSpec::new(2, 2, 1).unwrap();
        assert_eq!(star_claimed(&r).factors().unwrap(), &[2, 8]);
        let r = GaloisRingSpec::new(3, 1, 1).unwrap();
        assert_eq!(star_claimed(&r).factors().unwrap(), &[3, 3]);
    }

    #[test]
    fn star_inverse_formula() {
        for (p, k, r) in ring_parameters_up_to(16) {
            let ring = GaloisRingSpec::new(p, k, r).unwrap();
            let zero = (ring.zero(), ring.zero());
            for x in ring.elements() {
                for y in ring.elements() {
                    let a = (x.clone(), y);
                    assert_eq!(star_op(&ring, &a, &star_inverse(&ring, &a)), zero);
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let r = GaloisRingSpec::new(3, 2, 2).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"p":3,"k":2,"r":2,"modulus":[1,0,1]}"#);
        let back: GaloisRingSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let bad = r#"{"p":3,"k":1,"r":2,"modulus":[0,0,1]}"#;
        assert!(serde_json::from_str::<GaloisRingSpec>(bad).is_err());
    }

    proptest! {
        #[test]
        fn sampled_ring_axioms(pi in 0usize..4, k in 1u32..4, r in 1u32..4, seed in any::<u64>()) {
            let p = [2u64, 3, 5, 7][pi];
            let ring = GaloisRingSpec::new_with_max(p, k, r, u64::MAX).unwrap();
            let n = ring.size();
            let pick = |s: u64| ring.from_key(s % n);
            let (a, b, c) = (pick(seed), pick(seed.rotate_left(21)), pick(seed.rotate_left(42)));
            prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
            prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
            if ring.is_unit(&a) {
                let inv = ring.inverse(&a).unwrap();
                prop_assert_eq!(ring.mul(&a, &inv), ring.one());
            }
        }
    }
}
