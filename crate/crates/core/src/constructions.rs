//! Explicit difference bases with certificates.
//!
//! Ring constructions live in `R × R`, `R⋆R` and `R × U(R)` for a Galois ring
//! `R`. The two combiners are the union of bases for two subsets and the lift
//! of a basis along a surjective homomorphism. The recursive p-group
//! construction chains them: a quadratic base covers the part of the group
//! mapping onto `U(R) × R`, and the rest is a proper subgroup handled
//! recursively.

use std::collections::{BTreeSet, HashMap};

use crate::arith::prime_power;
use crate::certify::{Certificate, SubsetTag, Target};
use crate::data;
use crate::error::{Error, Result};
use crate::galois::{star_claimed, GaloisRingSpec, RingElement, DEFAULT_RING_MAX};
use crate::group::{decompose, Embedding, GroupElement, GroupKind, GroupSpec, Homomorphism};
use crate::interval::wichmann_basis;
use crate::solver::{min_difference_basis, SearchConfig, SearchStatus};

fn concat(x: &RingElement, y: &RingElement) -> GroupElement {
    let mut v = x.coeffs.clone();
    v.extend(&y.coeffs);
    GroupElement::new(v)
}

fn finish(c: Certificate) -> Result<Certificate> {
    c.verify()?;
    Ok(c)
}

fn ring_tag(ring: &GaloisRingSpec) -> String {
    format!("p={},k={},r={}", ring.p, ring.k, ring.r)
}

/// `{(x, x²)}` in the additive group `R × R`, covering `U(R) × R`. Needs `p` odd.
pub fn quadratic_base(ring: &GaloisRingSpec) -> Result<Certificate> {
    if ring.p == 2 {
        return Err(Error::Precondition("2 is not a unit in a ring of characteristic 2^k".into()));
    }
    let q = ring.char_modulus();
    let group = GroupSpec::abelian(vec![q; 2 * ring.degree()])?;
    let basis = ring.elements().map(|x| concat(&x, &ring.mul(&x, &x))).collect();
    finish(Certificate::new(
        group,
        Target::Tag {
            tag: SubsetTag::UnitsTimesRing,
            ring: ring.clone(),
        },
        basis,
        format!("quadratic({})", ring_tag(ring)),
    ))
}

/// The pair `(x, y)` with `x − y = a` and `x² − y² = b`, for a unit `a`.
pub fn quadratic_witness(ring: &GaloisRingSpec, a: &RingElement, b: &RingElement) -> Result<(RingElement, RingElement)> {
    let half = ring.inverse(&ring.constant(2))?;
    let ba = ring.mul(b, &ring.inverse(a)?);
    let x = ring.mul(&half, &ring.add(&ba, a));
    let y = ring.mul(&half, &ring.sub(&ba, a));
    Ok((x, y))
}

/// `{(x, x·x)}` in `R⋆R`, covering `U(R) × R`.
pub fn star_quadratic_base(ring: &GaloisRingSpec) -> Result<Certificate> {
    let group = GroupSpec::star(ring.clone());
    let basis = ring.elements().map(|x| concat(&x, &ring.mul(&x, &x))).collect();
    let mut c = Certificate::new(
        group,
        Target::Tag {
            tag: SubsetTag::UnitsTimesRing,
            ring: ring.clone(),
        },
        basis,
        format!("star-quadratic({})", ring_tag(ring)),
    );
    c.claimed = Some(star_claimed(ring));
    finish(c)
}

/// `{(x, x) : x ∈ U(R)}` in `R × U(R)`, covering `{(x, y) : x ∈ (y − 1)U(R)}`.
pub fn diagonal_unit_base(ring: &GaloisRingSpec) -> Result<Certificate> {
    let group = GroupSpec::ring_units(ring.clone());
    let basis = ring.units().map(|x| concat(&x, &x)).collect();
    finish(Certificate::new(
        group,
        Target::Tag {
            tag: SubsetTag::DiagonalImage,
            ring: ring.clone(),
        },
        basis,
        format!("diagonal-unit({})", ring_tag(ring)),
    ))
}

/// Target as an explicit element list, or `Full` when it is everything.
fn normalize_target(group: &GroupSpec, mut elems: Vec<GroupElement>) -> Target {
    elems.sort_by_key(|x| group.key(x));
    elems.dedup();
    if elems.len() as u64 == group.order() {
        Target::Full
    } else {
        Target::Elements(elems)
    }
}

/// Union of two bases after translating each to contain the identity.
pub fn union_combine(c1: &Certificate, c2: &Certificate) -> Result<Certificate> {
    if c1.group != c2.group {
        return Err(Error::GroupMismatch);
    }
    let g = &c1.group;
    let mut seen = BTreeSet::new();
    let mut basis = Vec::new();
    for c in [c1, c2] {
        let shift = match c.basis.first() {
            Some(b) => g.inverse(b),
            None => continue,
        };
        for b in &c.basis {
            let x = g.op(b, &shift);
            if seen.insert(g.key(&x)) {
                basis.push(x);
            }
        }
    }
    if basis.is_empty() {
        basis.push(g.identity());
    }
    let mut t = c1.target.resolve(g)?;
    t.extend(c2.target.resolve(g)?);
    let mut c = Certificate::new(
        g.clone(),
        normalize_target(g, t),
        basis,
        format!("union({}, {})", c1.method, c2.method),
    );
    c.claimed = c1.claimed.clone();
    finish(c)
}

/// Lifts an image certificate along `h`, multiplying each lifted element by a
/// basis of the kernel.
pub fn lift_combine(h: &Homomorphism, image: &Certificate, kernel: &Certificate) -> Result<Certificate> {
    if image.group != h.target || kernel.group != h.kernel {
        return Err(Error::GroupMismatch);
    }
    if kernel.target != Target::Full && kernel.target.resolve(&kernel.group)?.len() as u64 != h.kernel.order() {
        return Err(Error::KernelNotCovered);
    }
    kernel.verify().map_err(|_| Error::KernelNotCovered)?;
    let g = &h.source;
    let emb = h.kernel_embedding();
    let dk: Vec<GroupElement> = kernel.basis.iter().map(|d| emb.apply(d)).collect();
    let mut basis = Vec::with_capacity(image.size() * dk.len());
    for b in &image.basis {
        let lb = h.section(b);
        for d in &dk {
            basis.push(g.op(&lb, d));
        }
    }
    let kernel_elems: Vec<GroupElement> = h.kernel.elements().map(|x| emb.apply(&x)).collect();
    let mut t = Vec::new();
    for y in image.target.resolve(&image.group)? {
        let s = h.section(&y);
        for k in &kernel_elems {
            t.push(g.op(&s, k));
        }
    }
    finish(Certificate::new(
        g.clone(),
        normalize_target(g, t),
        basis,
        format!("lift({}; {})", image.method, kernel.method),
    ))
}

/// Image of a certificate under an embedding of abelian groups.
pub fn embed_certificate(c: &Certificate, e: &Embedding) -> Result<Certificate> {
    if c.group != e.sub {
        return Err(Error::GroupMismatch);
    }
    let t: Vec<GroupElement> = c.target.resolve(&c.group)?.iter().map(|x| e.apply(x)).collect();
    let target = normalize_target(&e.ambient, t);
    Ok(Certificate::new(
        e.ambient.clone(),
        target,
        c.basis.iter().map(|x| e.apply(x)).collect(),
        c.method.clone(),
    ))
}

fn cyclic_elements(basis: impl IntoIterator<Item = u64>) -> Vec<GroupElement> {
    basis.into_iter().map(|x| GroupElement::new(vec![x])).collect()
}

/// Reduces a basis of `[1, ⌈(n−1)/2⌉]` modulo `n`: the bundled minimum when
/// `⌈(n−1)/2⌉ ≤ 40`, a Wichmann ruler otherwise.
pub fn cyclic_from_interval(n: u64) -> Result<Certificate> {
    if n == 0 {
        return Err(Error::Precondition("cyclic order must be positive".into()));
    }
    let g = GroupSpec::cyclic(n);
    let m = (n - 1).div_ceil(2);
    if m == 0 {
        return finish(Certificate::new(g, Target::Full, vec![GroupElement::new(vec![])], "cyclic-interval(n=1)"));
    }
    // bundled minima where known, a Wichmann ruler beyond
    let basis = data::interval_basis(m).unwrap_or_else(|| wichmann_basis(m));
    let mut residues: Vec<u64> = basis.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect();
    residues.sort();
    residues.dedup();
    finish(Certificate::new(
        g,
        Target::Full,
        cyclic_elements(residues),
        format!("cyclic-interval(n={n},m={m})"),
    ))
}

/// Best available cyclic certificate: bundled optimum, else the interval reduction.
pub fn cyclic_certificate(n: u64) -> Result<Certificate> {
    if n == 1 {
        return cyclic_from_interval(1);
    }
    match data::cyclic_basis(n) {
        Some(b) => finish(Certificate::new(
            GroupSpec::cyclic(n),
            Target::Full,
            cyclic_elements(b.iter().copied()),
            format!("bundled-optimal(n={n})"),
        )),
        None => cyclic_from_interval(n),
    }
}

/// `GF(q^d)` for `q = p^s`, with the basic irreducible modulus.
fn extension_field(q: u64, d: u32, max: u64) -> Result<(u64, u32, GaloisRingSpec)> {
    let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let size = (q as u128).checked_pow(d);
    if size.is_none_or(|z| z > max as u128) {
        return Err(Error::Limit {
            what: "field size",
            value: size.unwrap_or(u128::MAX),
            max: max as usize,
        });
    }
    Ok((p, s, GaloisRingSpec::new_with_max(p, 1, s * d, max)?))
}

/// Smallest-key element of maximal multiplicative order and its log table.
fn generator_logs(f: &GaloisRingSpec) -> Result<(RingElement, HashMap<u64, u64>)> {
    let n = f.size() - 1;
    let gamma = f
        .units()
        .find(|x| f.multiplicative_order(x).is_ok_and(|o| o == n))
        .ok_or_else(|| Error::Internal("no primitive element found".into()))?;
    let mut logs = HashMap::with_capacity(n as usize);
    let mut x = f.one();
    for e in 0..n {
        logs.insert(f.key(&x), e);
        x = f.mul(&x, &gamma);
    }
    Ok((gamma, logs))
}

/// The subfield `GF(q)` of a field `F`, as the fixed points of `x ↦ x^q`.
fn subfield(f: &GaloisRingSpec, q: u64) -> Vec<RingElement> {
    f.elements().filter(|x| f.pow(x, q) == *x).collect()
}

/// Singer perfect difference set of size `q + 1` in `C_{q²+q+1}`.
pub fn singer_basis(q: u64) -> Result<Certificate> {
    singer_basis_with_max(q, DEFAULT_RING_MAX)
}

pub fn singer_basis_with_max(q: u64, field_max: u64) -> Result<Certificate> {
    let (_, _, f) = extension_field(q, 3, field_max)?;
    let v = q * q + q + 1;
    let (gamma, logs) = generator_logs(&f)?;
    // projective points of span{1, γ}: 1 and γ + a for a in GF(q)
    let mut residues = vec![0u64];
    for a in subfield(&f, q) {
        residues.push(logs[&f.key(&f.add(&gamma, &a))] % v);
    }
    residues.sort();
    residues.dedup();
    finish(Certificate::new(
        GroupSpec::cyclic(v),
        Target::Full,
        cyclic_elements(residues),
        format!("singer(q={q})"),
    ))
}

/// The Bose–Chowla Sidon set `{log(θ + a)}` in `C_{q²−1}`, covering every
/// residue outside the subgroup of multiples of `q + 1`.
pub fn bose_chowla_set(q: u64) -> Result<Certificate> {
    let (_, _, f) = extension_field(q, 2, DEFAULT_RING_MAX)?;
    let n = q * q - 1;
    let (theta, logs) = generator_logs(&f)?;
    let mut residues: Vec<u64> = subfield(&f, q)
        .iter()
        .map(|a| logs[&f.key(&f.add(&theta, a))] % n)
        .collect();
    residues.sort();
    let g = GroupSpec::cyclic(n);
    let target: Vec<GroupElement> = cyclic_elements((0..n).filter(|x| x % (q + 1) != 0 || *x == 0));
    finish(Certificate::new(
        g.clone(),
        normalize_target(&g, target),
        cyclic_elements(residues),
        format!("bose-chowla-sidon(q={q})"),
    ))
}

/// Basis of `C_{q²−1}` of size at most `q − 1 + Δ[C_{q−1}]`.
pub fn bose_chowla_basis(q: u64) -> Result<Certificate> {
    let sidon = bose_chowla_set(q)?;
    let n = q * q - 1;
    let sub = cyclic_certificate(q - 1)?;
    let sub_in = if q == 2 {
        Certificate::new(GroupSpec::cyclic(n), Target::Elements(cyclic_elements([0])), cyclic_elements([0]), sub.method)
    } else {
        let e = Embedding::new(sub.group.clone(), GroupSpec::cyclic(n), vec![(0, q + 1)])?;
        embed_certificate(&sub, &e)?
    };
    let mut c = union_combine(&sidon, &sub_in)?;
    c.method = format!("bose-chowla(q={q})");
    finish(c)
}

/// Options for the recursive p-group construction.
#[derive(Clone, Debug)]
pub struct RecursionOptions {
    /// Groups up to this order are solved exactly instead of split.
    pub exact_max_order: u64,
    /// Budget for each exact solve.
    pub exact_budget_ms: u64,
    /// `k` in the p = 2 step; the image is `C_{2^{k+1}}^r × C_{2^{k-1}}^r`.
    pub two_k: u32,
}

impl Default for RecursionOptions {
    fn default() -> Self {
        RecursionOptions {
            exact_max_order: 1,
            exact_budget_ms: 10_000,
            two_k: 1,
        }
    }
}

/// Difference basis of an abelian p-group from the ring recursions.
pub fn recursive_p_basis(g: &GroupSpec) -> Result<Certificate> {
    recursive_p_basis_with(g, &RecursionOptions::default())
}

pub fn recursive_p_basis_with(g: &GroupSpec, opts: &RecursionOptions) -> Result<Certificate> {
    let factors = match (g.kind(), g.factors()) {
        (GroupKind::Abelian, Some(f)) => f.to_vec(),
        _ => return Err(Error::NotPGroup(g.descriptor())),
    };
    let mut prime = None;
    for &f in &factors {
        let (p, _) = prime_power(f).ok_or_else(|| Error::NotPGroup(g.descriptor()))?;
        if *prime.get_or_insert(p) != p {
            return Err(Error::NotPGroup(g.descriptor()));
        }
    }
    let mut memo = HashMap::new();
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by_key(|&i| (factors[i], i));
    let sorted: Vec<u64> = order.iter().map(|&i| factors[i]).collect();
    let c = rec(&sorted, prime.unwrap_or(2), opts, &mut memo)?;
    let e = Embedding::permutation(c.group.clone(), g.clone(), &order)?;
    let mut out = embed_certificate(&c, &e)?;
    out.method = c.method;
    finish(out)
}

/// Certificate for `∏ C_{f_i}` with `f` sorted ascending.
fn rec(f: &[u64], p: u64, opts: &RecursionOptions, memo: &mut HashMap<Vec<u64>, Certificate>) -> Result<Certificate> {
    if let Some(c) = memo.get(f) {
        return Ok(c.clone());
    }
    let g = GroupSpec::abelian(f.to_vec())?;
    let c = if f.len() <= 1 {
        let n = f.first().copied().unwrap_or(1);
        let mut c = cyclic_certificate(n)?;
        c.group = g.clone();
        c
    } else if g.order() <= opts.exact_max_order {
        exact(&g, opts)?
    } else if p % 2 == 1 {
        odd_step(f, p, opts, memo)?
    } else if f.iter().filter(|&&x| x >= 1 << (opts.two_k + 1)).count() > 0 {
        two_step(f, opts, memo)?
    } else if g.order() <= 32 {
        exact(&g, opts)?
    } else {
        subgroup_split(&g)?
    };
    memo.insert(f.to_vec(), c.clone());
    Ok(c)
}

fn exact(g: &GroupSpec, opts: &RecursionOptions) -> Result<Certificate> {
    let r = min_difference_basis(g, &Target::Full, &SearchConfig::with_budget(opts.exact_budget_ms))?;
    let mut c = r.certificate;
    c.method = match r.status {
        SearchStatus::ProvedOptimal => format!("exact({})", g.descriptor()),
        SearchStatus::UpperOnly => format!("search-upper({})", g.descriptor()),
    };
    Ok(c)
}

/// Basis `H ∪ T` for a coordinate split `G = H × T`: every element is `h − (−t)`.
pub fn subgroup_split(g: &GroupSpec) -> Result<Certificate> {
    let f = g.factors().ok_or_else(|| Error::Precondition("abelian group required".into()))?;
    let cut = f.len() / 2;
    let mut basis = BTreeSet::new();
    for x in g.elements() {
        let low = x.coords[cut..].iter().all(|&c| c == 0);
        let high = x.coords[..cut].iter().all(|&c| c == 0);
        if low || high {
            basis.insert(x.coords.clone());
        }
    }
    finish(Certificate::new(
        g.clone(),
        Target::Full,
        basis.into_iter().map(GroupElement::new).collect(),
        format!("subgroup-split({})", g.descriptor()),
    ))
}

/// Sub-certificate for the group with factors `sub` (unsorted, possibly
/// containing 1s) transported into `ambient` along coordinate `map`.
fn child(
    sub: &[(u64, usize, u64)],
    ambient: &GroupSpec,
    p: u64,
    opts: &RecursionOptions,
    memo: &mut HashMap<Vec<u64>, Certificate>,
) -> Result<Certificate> {
    let mut parts: Vec<(u64, usize, u64)> = sub.iter().copied().filter(|&(m, _, _)| m > 1).collect();
    parts.sort_by_key(|&(m, i, _)| (m, i));
    let sorted: Vec<u64> = parts.iter().map(|&(m, _, _)| m).collect();
    let c = rec(&sorted, p, opts, memo)?;
    let e = Embedding::new(c.group.clone(), ambient.clone(), parts.iter().map(|&(_, i, s)| (i, s)).collect())?;
    let mut out = embed_certificate(&c, &e)?;
    out.method = c.method;
    Ok(out)
}

fn kernel_certificate(
    h: &Homomorphism,
    p: u64,
    opts: &RecursionOptions,
    memo: &mut HashMap<Vec<u64>, Certificate>,
) -> Result<Certificate> {
    let parts: Vec<(u64, usize, u64)> = h
        .kernel
        .factors()
        .expect("abelian")
        .iter()
        .enumerate()
        .map(|(j, &m)| (m, j, 1))
        .collect();
    child(&parts, &h.kernel, p, opts, memo)
}

/// Odd `p`: `r = ⌊m/2⌋`, `k` = smallest exponent, image `C_{p^k}^{2r} = R × R`.
fn odd_step(f: &[u64], p: u64, opts: &RecursionOptions, memo: &mut HashMap<Vec<u64>, Certificate>) -> Result<Certificate> {
    let g = GroupSpec::abelian(f.to_vec())?;
    let m = f.len();
    let r = m / 2;
    let (_, k) = prime_power(f[0]).expect("prime power factor");
    let q = p.pow(k);
    let ring = GaloisRingSpec::new_with_max(p, k, r as u32, u64::MAX)?;
    let rules: Vec<(usize, u64)> = (0..2 * r).map(|i| (i, q)).collect();
    let h = crate::group::reduction(&g, &rules)?;
    let image = quadratic_base(&ring)?;
    let kernel = kernel_certificate(&h, p, opts, memo)?;
    let lifted = lift_combine(&h, &image, &kernel)?;
    let ideal_parts: Vec<(u64, usize, u64)> = (0..m)
        .map(|i| if i < r { (f[i] / p, i, p) } else { (f[i], i, 1) })
        .collect();
    let ideal = child(&ideal_parts, &g, p, opts, memo)?;
    let mut c = union_combine(&lifted, &ideal)?;
    c.target = Target::Full;
    c.method = format!(
        "recursive-p({}: k={k}, r={r}; {} x {} + {} - 1)",
        g.descriptor(),
        kernel.size(),
        ring.size(),
        ideal.size()
    );
    finish(c)
}

/// `p = 2`: image `C_{2^{k+1}}^r × C_{2^{k-1}}^r ≅ R⋆R` for `R = GR(2^k, r)`.
fn two_step(f: &[u64], opts: &RecursionOptions, memo: &mut HashMap<Vec<u64>, Certificate>) -> Result<Certificate> {
    let g = GroupSpec::abelian(f.to_vec())?;
    let k = opts.two_k.max(1);
    let hi = 1u64 << (k + 1);
    let lo = 1u64 << (k - 1);
    // first block: factors of order >= 2^{k+1}; second block: factors of order >= 2^{k-1}
    let first: Vec<usize> = (0..f.len()).filter(|&i| f[i] >= hi).collect();
    let mut r = first.len();
    let second: Vec<usize> = if k == 1 {
        vec![]
    } else {
        let others: Vec<usize> = (0..f.len()).filter(|i| !first.contains(i) && f[*i] >= lo).collect();
        r = r.min(others.len());
        others
    };
    if r == 0 {
        return subgroup_split(&g);
    }
    let first = &first[..r];
    let second: &[usize] = if k == 1 { &[] } else { &second[..r] };
    let ring = GaloisRingSpec::new_with_max(2, k, r as u32, u64::MAX)?;
    let star = star_quadratic_base(&ring)?;
    let dec = decompose(&star.group)?;
    // target coordinates ordered like the canonical form of R⋆R
    let mut rules: Vec<(usize, u64)> = second.iter().map(|&i| (i, lo)).collect();
    rules.extend(first.iter().map(|&i| (i, hi)));
    let h = crate::group::reduction(&g, &rules)?;
    if h.target != dec.spec {
        return Err(Error::Internal(format!(
            "star group {} does not match image {}",
            dec.spec.descriptor(),
            h.target.descriptor()
        )));
    }
    let image_target: Vec<GroupElement> = star
        .target
        .resolve(&star.group)?
        .iter()
        .map(|x| dec.to_canonical(x))
        .collect();
    let image = finish(Certificate::new(
        h.target.clone(),
        normalize_target(&h.target, image_target),
        star.basis.iter().map(|x| dec.to_canonical(x)).collect(),
        star.method.clone(),
    ))?;
    let kernel = kernel_certificate(&h, 2, opts, memo)?;
    let lifted = lift_combine(&h, &image, &kernel)?;
    let ideal_parts: Vec<(u64, usize, u64)> = (0..f.len())
        .map(|i| if first.contains(&i) { (f[i] / 2, i, 2) } else { (f[i], i, 1) })
        .collect();
    let ideal = child(&ideal_parts, &g, 2, opts, memo)?;
    let mut c = union_combine(&lifted, &ideal)?;
    c.target = Target::Full;
    c.method = format!(
        "recursive-2({}: k={k}, r={r}; {} x {} + {} - 1)",
        g.descriptor(),
        kernel.size(),
        ring.size(),
        ideal.size()
    );
    finish(c)
}

/// The recursive size bound for the parameters `recursive_p_basis` picks,
/// given sizes for the two smaller groups.
pub fn recursive_bound(kernel_size: u64, ring_size: u64, ideal_size: u64) -> u64 {
    kernel_size * ring_size + ideal_size - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{check_certificate, is_perfect_difference_set};
    use crate::group::{parse_group_spec, reduction};

    fn ring(p: u64, k: u32, r: u32) -> GaloisRingSpec {
        GaloisRingSpec::new(p, k, r).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        let c = quadratic_base(&ring(3, 1, 1)).unwrap();
        let b: Vec<Vec<u64>> = c.basis.iter().map(|x| x.coords.clone()).collect();
        assert_eq!(b, vec![vec![0, 0], vec![1, 1], vec![2, 1]]);
        assert_eq!(check_certificate(&c).unwrap().target_size, 6);
        assert_eq!(quadratic_base(&ring(5, 1, 1)).unwrap().size(), 5);
        let c = quadratic_base(&ring(3, 2, 1)).unwrap();
        assert_eq!((c.size(), check_certificate(&c).unwrap().target_size), (9, 54));
        assert!(matches!(quadratic_base(&ring(2, 1, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn quadratic_witness_formula() {
        for (p, k, r) in [(3, 1, 1), (3, 2, 1), (5, 1, 1), (3, 1, 2), (7, 1, 1), (5, 2, 1), (3, 3, 1)] {
            let rg = ring(p, k, r);
            for a in rg.units() {
                for b in rg.elements() {
                    let (x, y) = quadratic_witness(&rg, &a, &b).unwrap();
                    assert_eq!(rg.sub(&x, &y), a);
                    assert_eq!(rg.sub(&rg.mul(&x, &x), &rg.mul(&y, &y)), b);
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        let c = star_quadratic_base(&ring(2, 1, 1)).unwrap();
        assert_eq!((c.size(), check_certificate(&c).unwrap().target_size), (2, 2));
        let c = star_quadratic_base(&ring(2, 2, 1)).unwrap();
        assert_eq!((c.size(), check_certificate(&c).unwrap().target_size), (4, 8));
        assert_eq!(c.claimed.as_ref().unwrap().descriptor(), "C2xC8");
        let c = star_quadratic_base(&ring(2, 1, 2)).unwrap();
        assert_eq!((c.size(), check_certificate(&c).unwrap().target_size), (4, 12));
    }

    #[test]
    fn diagonal_examples() {
        let c = diagonal_unit_base(&ring(3, 1, 1)).unwrap();
        let b: Vec<Vec<u64>> = c.basis.iter().map(|x| x.coords.clone()).collect();
        assert_eq!(b, vec![vec![1, 1], vec![2, 2]]);
        assert_eq!(check_certificate(&c).unwrap().target_size, 3);
        assert_eq!(diagonal_unit_base(&ring(5, 1, 1)).unwrap().size(), 4);
    }

    #[test]
    fn union_examples() {
        let g = GroupSpec::cyclic(9);
        let id = Certificate::new(g.clone(), Target::Elements(vec![g.identity()]), vec![g.identity()], "id");
        assert_eq!(union_combine(&id, &id).unwrap().size(), 1);
        let s1 = Certificate::new(
            g.clone(),
            Target::Elements(cyclic_elements([1, 2, 3, 6, 7, 8])),
            cyclic_elements([2, 3, 5]),
            "s1",
        );
        let s2 = Certificate::new(g.clone(), Target::Elements(cyclic_elements([0, 4, 5])), cyclic_elements([0, 4]), "s2");
        s1.verify().unwrap();
        s2.verify().unwrap();
        let u = union_combine(&s1, &s2).unwrap();
        assert!(u.size() <= 4);
        assert_eq!(u.target.resolve(&g).unwrap().len(), 9);
        assert_eq!(u.target, Target::Full);
        let other = Certificate::new(GroupSpec::cyclic(3), Target::Full, cyclic_elements([0, 1]), "c3");
        assert!(matches!(union_combine(&s1, &other), Err(Error::GroupMismatch)));
    }

    #[test]
    fn lift_examples() {
        let c4 = GroupSpec::cyclic(4);
        let h = reduction(&c4, &[(0, 2)]).unwrap();
        let img = Certificate::new(h.target.clone(), Target::Full, cyclic_elements([0, 1]), "c2");
        let ker = Certificate::new(h.kernel.clone(), Target::Full, cyclic_elements([0, 1]), "k");
        let c = lift_combine(&h, &img, &ker).unwrap();
        assert!(c.size() <= 4);
        assert_eq!(c.target, Target::Full);

        let g = parse_group_spec("C3^2").unwrap();
        let h = reduction(&g, &[(0, 3)]).unwrap();
        let img = Certificate::new(h.target.clone(), Target::Full, cyclic_elements([0, 1]), "c3");
        let ker = Certificate::new(h.kernel.clone(), Target::Full, cyclic_elements([0, 1]), "k");
        assert_eq!(lift_combine(&h, &img, &ker).unwrap().size(), 4);

        let bad = Certificate::new(h.kernel.clone(), Target::Full, cyclic_elements([0]), "k");
        assert!(matches!(lift_combine(&h, &img, &bad), Err(Error::KernelNotCovered)));
    }

    #[test]
    fn interval_reduction_examples() {
        assert_eq!(cyclic_from_interval(13).unwrap().size(), 4);
        assert_eq!(cyclic_from_interval(7).unwrap().size(), 3);
        assert_eq!(cyclic_from_interval(2).unwrap().size(), 2);
        assert_eq!(cyclic_from_interval(1).unwrap().size(), 1);
    }

    #[test]
    fn singer_examples() {
        for (q, n) in [(2, 7), (3, 13), (4, 21), (5, 31)] {
            let c = singer_basis(q).unwrap();
            assert_eq!((c.size() as u64, c.group.order()), (q + 1, n));
            assert!(is_perfect_difference_set(&c.group, &c.basis));
        }
        assert!(matches!(singer_basis(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn bose_chowla_examples() {
        for (q, n, bound) in [(3, 8, 4), (4, 15, 5), (5, 24, 7)] {
            let c = bose_chowla_basis(q).unwrap();
            assert_eq!(c.group.order(), n);
            assert!(c.size() as u64 <= bound, "q={q}: {}", c.size());
            assert_eq!(c.target, Target::Full);
        }
        // the Sidon part has every difference at most once
        let s = bose_chowla_set(7).unwrap();
        let mult = crate::certify::difference_multiplicities(&s.group, &s.basis);
        assert!(mult.iter().all(|&m| m <= 1));
    }

    #[test]
    fn recursive_examples() {
        let c = recursive_p_basis(&parse_group_spec("C3^2").unwrap()).unwrap();
        assert_eq!(c.size(), 4);
        let c = recursive_p_basis(&parse_group_spec("C5^2").unwrap()).unwrap();
        assert!(c.size() <= 7);
        let c = recursive_p_basis(&GroupSpec::cyclic(27)).unwrap();
        assert_eq!(c.size() as u64, data::cyclic_delta(27).unwrap_or(c.size() as u64));
        let c = recursive_p_basis(&parse_group_spec("C4^2").unwrap()).unwrap();
        assert_eq!(c.size(), 6);
        assert!(matches!(
            recursive_p_basis(&GroupSpec::cyclic(6)),
            Err(Error::NotPGroup(_))
        ));
    }

    #[test]
    fn recursive_handles_unsorted_factors() {
        let g = GroupSpec::abelian(vec![9, 3, 3]).unwrap();
        let c = recursive_p_basis(&g).unwrap();
        assert_eq!(c.group, g);
        assert!(check_certificate(&c).unwrap().valid);
    }
}
