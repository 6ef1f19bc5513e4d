//! Difference bases for the integer interval `[1, n]`.
//!
//! A *restricted* basis lies inside `[0, n]` (a sparse ruler). An
//! unrestricted basis may use any integers and can be smaller: seven
//! integers cover `[1, 18]`, seven ruler marks only `[1, 17]`. For `n` up to
//! [`INTERVAL_EXACT_MAX`] the unrestricted minimum is settled. The search
//! starts from a minimum ruler and tries smaller integer sets of bounded
//! span until one size is refuted, or stops early once `Δ[C_{2n+1}]` matches,
//! since any integer basis of `[1, n]` reduces to a basis of `C_{2n+1}`.
//!
//! The span bound: pick one pair per difference in `[1, n]`. Translating the
//! connected components of the resulting graph onto a common minimum keeps
//! every difference and does not grow the set, so a basis of size `k` may be
//! assumed connected by `k - 1` pairs of distinct lengths, giving span at most
//! `n + (n - 1) + ... + (n - k + 2)`.

use serde::Serialize;

use crate::certify::IntervalCertificate;
use crate::data;
use crate::error::{Error, Result};
use crate::solver::{Control, Problem};

/// Largest `n` for which interval minima are certified exactly.
pub const INTERVAL_EXACT_MAX: u64 = 40;
/// Largest `n` accepted at all.
pub const INTERVAL_MAX: u64 = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct IntervalResult {
    pub certificate: IntervalCertificate,
    pub delta: u64,
    /// Whether `delta` is proven minimal over all integer sets.
    pub exact: bool,
    pub characteristic: f64,
}

/// Wichmann ruler `W(r, s)`: `4r + s + 3` marks, length `4r(r + s + 2) + 3(s + 1)`.
pub fn wichmann_ruler(r: u64, s: u64) -> Vec<i64> {
    let gaps = std::iter::repeat_n(1, r as usize)
        .chain(std::iter::once(r + 1))
        .chain(std::iter::repeat_n(2 * r + 1, r as usize))
        .chain(std::iter::repeat_n(4 * r + 3, s as usize))
        .chain(std::iter::repeat_n(2 * r + 2, r as usize + 1))
        .chain(std::iter::repeat_n(1, r as usize));
    let mut marks = vec![0i64];
    for g in gaps {
        marks.push(marks.last().unwrap() + g as i64);
    }
    marks
}

/// The smallest Wichmann ruler of length at least `n`.
pub fn wichmann_basis(n: u64) -> Vec<i64> {
    let mut best: Option<Vec<i64>> = None;
    for r in 0..=n {
        if 4 * r + 3 > best.as_ref().map_or(u64::MAX, |b| b.len() as u64) {
            break;
        }
        // smallest s reaching length n
        let base = 4 * r * (r + 2) + 3;
        let step = 4 * r + 3;
        let s = if n <= base { 0 } else { (n - base).div_ceil(step) };
        let w = wichmann_ruler(r, s);
        if best.as_ref().is_none_or(|b| w.len() < b.len()) {
            best = Some(w);
        }
    }
    best.unwrap_or_else(|| vec![0, 1])
}

/// A minimum restricted ruler for `n`, or the best one found within the budget.
/// The flag reports whether minimality among rulers was proven.
pub fn restricted_interval_basis(n: u64, budget_ms: u64) -> Result<(Vec<i64>, bool)> {
    check_n(n)?;
    Ok(search_restricted_ruler(n, budget_ms))
}

/// Exact window search for a minimum ruler in `[0, n]`, falling back to a
/// Wichmann ruler (possibly longer than `n`) when the budget runs out.
pub fn search_restricted_ruler(n: u64, budget_ms: u64) -> (Vec<i64>, bool) {
    let len = n as usize;
    let p = Problem::window(len);
    let ctl = Control::new(budget_ms.max(1), 1, 0);
    let lb = crate::arith::min_pairs_size(2 * n);
    let mut wich = wichmann_basis(n);
    if wich.len() > len + 1 {
        wich = (0..=n as i64).collect();
    }
    // A Wichmann ruler may be longer than n, so the search runs up to its
    // size inclusive to return one inside [0, n].
    let (found, _, _) = p.deepen(lb as usize, wich.len(), &ctl);
    match found {
        Some(set) => {
            let mut b: Vec<i64> = set.iter().map(|&x| x as i64).collect();
            b.sort();
            (b, true)
        }
        None => (wich, false),
    }
}

/// Searches integer sets of size `k` covering `[1, n]`. `None` on timeout,
/// `Some(None)` when refuted.
pub(crate) fn unrestricted_search(n: u64, k: u64, budget_ms: u64) -> Option<Option<Vec<i64>>> {
    if k < 2 {
        return Some(None);
    }
    let span: u64 = (0..k - 1).map(|i| n.saturating_sub(i)).sum();
    let p = Problem::integer(n as usize, span as usize);
    let ctl = Control::new(budget_ms.max(1), 1, 0);
    let (found, _, timeout) = p.deepen(k as usize, k as usize, &ctl);
    if timeout {
        return None;
    }
    Some(found.map(|set| {
        let mut b: Vec<i64> = set.iter().map(|&x| x as i64).collect();
        b.sort();
        b
    }))
}

/// Minimum integer basis of `[1, n]` by search: a ruler first, then smaller
/// unrestricted sets until one size is refuted. The flag reports whether
/// minimality was proven.
pub fn search_interval_basis(n: u64, budget_ms: u64) -> (Vec<i64>, bool) {
    let (mut best, ruler_exact) = search_restricted_ruler(n, budget_ms);
    if n > INTERVAL_EXACT_MAX || !ruler_exact {
        return (best, false);
    }
    loop {
        // any integer basis of [1, n] reduces to a basis of C_{2n+1}
        if data::cyclic_delta(2 * n + 1).is_some_and(|d| d >= best.len() as u64) {
            return (best, true);
        }
        match unrestricted_search(n, best.len() as u64 - 1, budget_ms) {
            Some(Some(b)) => best = b,
            Some(None) => return (best, true),
            None => return (best, false),
        }
    }
}

/// Minimum difference basis of `[1, n]`.
pub fn interval_basis(n: u64, budget_ms: u64) -> Result<IntervalResult> {
    check_n(n)?;
    let (basis, exact, method) = match data::interval_basis(n) {
        Some(b) => (b, true, format!("interval(n={n},bundled)")),
        None => {
            let (b, exact) = search_interval_basis(n, budget_ms);
            let how = if exact { "exact" } else { "upper" };
            (b, exact, format!("interval(n={n},{how})"))
        }
    };
    let cert = IntervalCertificate::new(n, basis, method);
    cert.verify()?;
    Ok(IntervalResult {
        delta: cert.size() as u64,
        characteristic: cert.characteristic(),
        certificate: cert,
        exact,
    })
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("interval length must be positive".into()));
    }
    if n > INTERVAL_MAX {
        return Err(Error::Limit {
            what: "interval length",
            value: n as u128,
            max: INTERVAL_MAX as usize,
        });
    }
    Ok(())
}
