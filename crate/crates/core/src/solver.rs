//! Exact minimum difference bases by branch and bound.
//!
//! Coverage is tracked on classes `{g, g⁻¹}` of target elements, since every
//! pair of basis elements produces both members of a class. A search for a
//! basis of size `K` grows a set `S` containing the identity. Each node picks
//! the uncovered class with the fewest candidates covering it against `S` and
//! branches on those candidates; a last branch excludes them all, leaving the
//! class to a pair of later elements. A node is pruned when
//!
//! ```text
//! uncovered > (sum of the m best single-element gains) + m(m-1)/2
//! ```
//!
//! where `m = K - |S|`: each later element covers at most its gain against
//! `S`, and the `m(m-1)/2` pairs among later elements cover one class each.
//!
//! Symmetry: translating a basis so that a pair `(a, b)` with
//! `σ(a b⁻¹) = g0` lands on `{e, g0}` is always possible, for any
//! automorphism `σ` in the enabled set. Among those normal forms the search
//! only keeps the ones whose smallest remaining key `x1` is minimal, which is
//! enforced incrementally as pairs appear.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, min_pairs_size};
use crate::certify::{Certificate, Target};
use crate::error::{Error, Result};
use crate::group::{element_order, GroupElement, GroupKind, GroupSpec};

/// Largest group order the engine accepts.
pub const SOLVER_MAX_ORDER: u64 = 2048;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryLevel {
    None,
    Translation,
    TranslationNegation,
    TranslationMultiplier,
}

impl std::str::FromStr for SymmetryLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SymmetryLevel::None),
            "translation" => Ok(SymmetryLevel::Translation),
            "translation-negation" | "negation" => Ok(SymmetryLevel::TranslationNegation),
            "translation-multiplier" | "multiplier" => Ok(SymmetryLevel::TranslationMultiplier),
            other => Err(Error::Parse(format!("unknown symmetry level `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub time_budget_ms: u64,
    pub worker_count: usize,
    pub symmetry: SymmetryLevel,
    /// Known upper bound; informational unless `seed` is set.
    pub initial_upper: Option<u64>,
    /// A valid certificate; the search stops once its size is reached.
    pub seed: Option<Certificate>,
    pub split_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_budget_ms: 60_000,
            worker_count: 1,
            symmetry: SymmetryLevel::TranslationMultiplier,
            initial_upper: None,
            seed: None,
            split_depth: 2,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(ms: u64) -> Self {
        SearchConfig {
            time_budget_ms: ms,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    ProvedOptimal,
    UpperOnly,
}

#[derive(Clone, Debug)]
pub struct OptimalResult {
    /// Size of the returned certificate.
    pub delta: u64,
    /// Proven lower bound; equals `delta` when proved optimal.
    pub lower: u64,
    pub certificate: Certificate,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
}

/// Key-level view of a group with a target.
pub(crate) struct Problem {
    n: usize,
    mul: Vec<u32>,
    diff: Vec<u32>,
    dcls: Vec<u32>,
    ncls: usize,
    allowed: Vec<u64>,
    auts: Vec<Vec<u32>>,
    aut_inv: Vec<Vec<u32>>,
    to_g0: Vec<Vec<u16>>,
    mode: Mode,
    /// Keys forced into every solution in `Plain` mode, starting with `0`.
    base: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Mode {
    /// `S` starts as `{e}`, no symmetry reduction.
    Plain,
    /// `S` starts as `{e, g0}` with the `x1` normal form.
    Pair { g0: u32 },
    /// Integer window `[0, len]` inside the cyclic group of order `2 len + 1`.
    Window { len: u32 },
}

pub(crate) enum Outcome {
    Found(Vec<u32>),
    Refuted,
    Timeout,
}

impl Problem {
    /// Tables for `g` with target keys `target`; `symmetry` decides the mode.
    pub(crate) fn new(g: &GroupSpec, target: &[usize], symmetry: SymmetryLevel) -> Result<Self> {
        let n = g.order() as usize;
        let (mul, inv) = key_tables(g)?;
        let mut p = Problem::from_tables(n, mul, inv, target);
        let orders: Vec<u64> = g.elements().map(|x| element_order(g, &x)).collect();
        let g0 = (1..n)
            .filter(|&x| p.cls_of(x) != NONE)
            .max_by_key(|&x| (orders[x], std::cmp::Reverse(x)));
        // In (Z/p^a)^m any basis through 0 generates the group, hence contains
        // the image of a standard generating set under some automorphism.
        if let (SymmetryLevel::TranslationMultiplier, Some(f)) = (symmetry, g.factors()) {
            let full = p.ncls > 0 && (1..n).all(|x| p.cls_of(x) != NONE);
            if g.kind() == GroupKind::Abelian && f.len() >= 2 && f.iter().all(|&q| q == f[0]) && full {
                p.base = std::iter::once(0)
                    .chain((0..f.len()).map(|i| {
                        let mut c = vec![0u64; f.len()];
                        c[i] = 1;
                        g.key(&GroupElement::new(c)) as u32
                    }))
                    .collect();
                p.mode = Mode::Plain;
                return Ok(p);
            }
        }
        let g0 = match (g0, symmetry) {
            (None, _) | (_, SymmetryLevel::None) => {
                p.mode = Mode::Plain;
                return Ok(p);
            }
            (Some(x), _) => x as u32,
        };
        p.mode = Mode::Pair { g0 };
        let mut auts: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        let abelian = g.kind() != GroupKind::Generic || g.is_commutative();
        let power_map = |u: u64| -> Vec<u32> {
            (0..n)
                .map(|k| g.key(&g.pow(&g.element(k), u)) as u32)
                .collect()
        };
        match symmetry {
            SymmetryLevel::TranslationNegation if abelian && n > 2 => {
                auts.push(power_map(n as u64 - 1));
            }
            SymmetryLevel::TranslationMultiplier if abelian && n > 2 => {
                if g.is_cyclic() {
                    for u in 2..n as u64 {
                        if gcd(u, n as u64) == 1 {
                            auts.push(power_map(u));
                        }
                    }
                } else {
                    auts.push(power_map(n as u64 - 1));
                }
            }
            _ => {}
        }
        // keep only automorphisms preserving the target
        let in_target: Vec<bool> = (0..n).map(|x| x == 0 || p.cls_of(x) != NONE).collect();
        auts.retain(|s| (0..n).all(|x| in_target[x] == in_target[s[x] as usize]));
        auts.sort();
        auts.dedup();
        p.set_auts(auts, g0);
        Ok(p)
    }

    fn from_tables(n: usize, mul: Vec<u32>, inv: Vec<u32>, target: &[usize]) -> Self {
        let mut diff = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                diff[a * n + b] = mul[a * n + inv[b] as usize];
            }
        }
        let mut cls = vec![NONE; n];
        let mut ncls = 0usize;
        let mut targets: Vec<usize> = target.iter().copied().filter(|&x| x != 0).collect();
        targets.sort();
        for x in targets {
            if cls[x] == NONE {
                cls[x] = ncls as u32;
                cls[inv[x] as usize] = ncls as u32;
                ncls += 1;
            }
        }
        let dcls = diff.iter().map(|&d| cls[d as usize]).collect();
        let words = n.div_ceil(64);
        let mut allowed = vec![0u64; words];
        for x in 0..n {
            allowed[x / 64] |= 1 << (x % 64);
        }
        Problem {
            n,
            mul,
            diff,
            dcls,
            ncls,
            allowed,
            auts: vec![],
            aut_inv: vec![],
            to_g0: vec![],
            mode: Mode::Plain,
            base: vec![0],
        }
    }

    /// Window problem for the integer interval `[1, len]`.
    pub(crate) fn window(len: usize) -> Self {
        let n = 2 * len + 1;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u32;
            }
        }
        let inv: Vec<u32> = (0..n).map(|a| ((n - a) % n) as u32).collect();
        let target: Vec<usize> = (1..n).collect();
        let mut p = Problem::from_tables(n, mul, inv, &target);
        p.allowed = vec![0u64; n.div_ceil(64)];
        for x in 0..=len {
            p.allowed[x / 64] |= 1 << (x % 64);
        }
        p.mode = Mode::Window { len: len as u32 };
        p
    }

    /// Integer problem: sets inside `[0, span]` covering the differences
    /// `[1, len]`, embedded in a cyclic group large enough to avoid wraparound.
    pub(crate) fn integer(len: usize, span: usize) -> Self {
        let n = 2 * span + 1;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u32;
            }
        }
        let inv: Vec<u32> = (0..n).map(|a| ((n - a) % n) as u32).collect();
        let target: Vec<usize> = (1..=len).collect();
        let mut p = Problem::from_tables(n, mul, inv, &target);
        p.allowed = vec![0u64; n.div_ceil(64)];
        for x in 0..=span {
            p.allowed[x / 64] |= 1 << (x % 64);
        }
        p
    }

    /// Iterative deepening from `from` up to `to` inclusive. Returns the
    /// first basis found, or `None` with the smallest size not refuted.
    pub(crate) fn deepen(&self, from: usize, to: usize, ctl: &Control) -> (Option<Vec<u32>>, usize, bool) {
        let mut k = from;
        while k <= to {
            match self.search(k, ctl) {
                Outcome::Found(set) => return (Some(set), k, false),
                Outcome::Refuted => k += 1,
                Outcome::Timeout => return (None, k, true),
            }
        }
        (None, k, false)
    }

    fn cls_of(&self, x: usize) -> u32 {
        self.dcls[x * self.n]
    }

    fn set_auts(&mut self, auts: Vec<Vec<u32>>, g0: u32) {
        let n = self.n;
        self.aut_inv = auts
            .iter()
            .map(|s| {
                let mut inv = vec![0u32; n];
                for (x, &y) in s.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        self.to_g0 = vec![Vec::new(); n];
        for (i, inv) in self.aut_inv.iter().enumerate() {
            self.to_g0[inv[g0 as usize] as usize].push(i as u16);
        }
        self.auts = auts;
    }

    fn classes_covered_by(&self, set: &[u32]) -> Vec<bool> {
        let mut cov = vec![false; self.ncls];
        for &a in set {
            for &b in set {
                let c = self.dcls[a as usize * self.n + b as usize];
                if c != NONE {
                    cov[c as usize] = true;
                }
            }
        }
        cov
    }

    /// Greedy cover: repeatedly add the element with the largest gain.
    pub(crate) fn greedy(&self) -> Vec<u32> {
        let mut set = vec![0u32];
        let mut cov = vec![false; self.ncls];
        let mut left = self.ncls;
        let allowed = |x: usize| self.allowed[x / 64] >> (x % 64) & 1 == 1;
        if let Mode::Window { len } = self.mode {
            set.push(len);
            cov = self.classes_covered_by(&set);
            left = cov.iter().filter(|c| !**c).count();
        }
        while left > 0 {
            let mut best = (0usize, NONE);
            for y in 0..self.n {
                if !allowed(y) || set.contains(&(y as u32)) {
                    continue;
                }
                let mut seen = Vec::new();
                for &s in &set {
                    let c = self.dcls[y * self.n + s as usize];
                    if c != NONE && !cov[c as usize] && !seen.contains(&c) {
                        seen.push(c);
                    }
                }
                if seen.len() > best.0 {
                    best = (seen.len(), y as u32);
                }
            }
            if best.1 == NONE {
                break;
            }
            set.push(best.1);
            for &s in &set {
                for c in [
                    self.dcls[best.1 as usize * self.n + s as usize],
                    self.dcls[s as usize * self.n + best.1 as usize],
                ] {
                    if c != NONE && !cov[c as usize] {
                        cov[c as usize] = true;
                        left -= 1;
                    }
                }
            }
        }
        set
    }

    pub(crate) fn covers(&self, set: &[u32]) -> bool {
        self.classes_covered_by(set).iter().all(|&c| c)
    }

    /// Searches for a basis of size at most `k`.
    pub(crate) fn search(&self, k: usize, ctl: &Control) -> Outcome {
        match self.n.div_ceil(64) {
            0 | 1 => self.search_w::<1>(k, ctl),
            2 => self.search_w::<2>(k, ctl),
            3 | 4 => self.search_w::<4>(k, ctl),
            5..=8 => self.search_w::<8>(k, ctl),
            9..=16 => self.search_w::<16>(k, ctl),
            _ => self.search_w::<32>(k, ctl),
        }
    }

    fn search_w<const W: usize>(&self, k: usize, ctl: &Control) -> Outcome {
        let roots = self.roots::<W>(k);
        let mut tasks = Vec::new();
        for root in roots {
            match root {
                Root::Done(set) => return Outcome::Found(set),
                Root::Task(t) => tasks.push(t),
            }
        }
        // expand to the split depth so work spreads over the workers
        if ctl.workers > 1 {
            let mut expanded = Vec::new();
            for t in tasks {
                let mut w = Worker::<W>::new(self, k, ctl, &t);
                w.collect = Some((ctl.split_depth.saturating_sub(1), Vec::new()));
                match w.run(&t) {
                    Flow::Found => return Outcome::Found(w.s.clone()),
                    Flow::Abort => return Outcome::Timeout,
                    Flow::Continue => {}
                }
                ctl.nodes.fetch_add(w.nodes, Ordering::Relaxed);
                expanded.extend(w.collect.take().expect("collecting").1);
            }
            tasks = expanded;
        }
        let first_found = AtomicUsize::new(usize::MAX);
        let run = |(i, t): (usize, &Task<W>)| -> Option<std::result::Result<Vec<u32>, ()>> {
            if first_found.load(Ordering::Relaxed) < i {
                return None;
            }
            let mut w = Worker::<W>::new(self, k, ctl, t);
            w.task_index = i;
            w.first_found = Some(&first_found);
            let flow = w.run(t);
            ctl.nodes.fetch_add(w.nodes, Ordering::Relaxed);
            match flow {
                Flow::Found => {
                    first_found.fetch_min(i, Ordering::Relaxed);
                    Some(Ok(w.s.clone()))
                }
                Flow::Abort if ctl.stop.load(Ordering::Relaxed) => Some(Err(())),
                _ => None,
            }
        };
        let result = if ctl.workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(ctl.workers)
                .build()
                .expect("thread pool");
            pool.install(|| tasks.par_iter().enumerate().find_map_first(run))
        } else {
            tasks.iter().enumerate().find_map(run)
        };
        match result {
            Some(Ok(set)) => Outcome::Found(set),
            Some(Err(())) => Outcome::Timeout,
            None if ctl.stop.load(Ordering::Relaxed) => Outcome::Timeout,
            None => Outcome::Refuted,
        }
    }

    fn full_mask<const W: usize>(&self) -> [u64; W] {
        let mut m = [0u64; W];
        for i in 0..self.ncls {
            m[i / 64] |= 1 << (i % 64);
        }
        m
    }

    fn roots<const W: usize>(&self, k: usize) -> Vec<Root<W>> {
        let mut cand = [0u64; W];
        cand[..self.allowed.len()].copy_from_slice(&self.allowed);
        clear(&mut cand, 0);
        let empty = [0u64; W];
        if self.ncls == 0 {
            return if k >= 1 { vec![Root::Done(vec![0])] } else { vec![] };
        }
        if k < 2 {
            return vec![];
        }
        match self.mode {
            Mode::Plain => {
                if self.base.len() > k {
                    return vec![];
                }
                let mut s = vec![0u32];
                let mut cov = empty;
                for &y in &self.base[1..] {
                    self.include(&mut s, &mut cov, &mut cand, y, &[], 0);
                }
                if self.covers(&s) {
                    return vec![Root::Done(s)];
                }
                vec![Root::Task(Task {
                    s,
                    cov,
                    cand,
                    x1: 0,
                    low: vec![],
                })]
            }
            Mode::Window { len } => {
                let s0 = vec![0, len];
                if self.covers(&s0) {
                    return vec![Root::Done(s0)];
                }
                let mut cov = empty;
                for c in self.classes_covered_by(&s0).iter().enumerate() {
                    if *c.1 {
                        set(&mut cov, c.0);
                    }
                }
                clear(&mut cand, len as usize);
                let mut out = Vec::new();
                if k < 3 {
                    return out;
                }
                // x1 is the smallest interior mark and len - x1 bounds the largest
                for x1 in 1..=len / 2 {
                    let mut c = cand;
                    for y in 1..x1 {
                        clear(&mut c, y as usize);
                    }
                    for y in len - x1 + 1..len {
                        clear(&mut c, y as usize);
                    }
                    let mut s = s0.clone();
                    let mut cv = cov;
                    self.include(&mut s, &mut cv, &mut c, x1, &[], 0);
                    out.push(Root::Task(Task {
                        s,
                        cov: cv,
                        cand: c,
                        x1: 0,
                        low: vec![],
                    }));
                }
                out
            }
            Mode::Pair { g0 } => {
                if self.covers(&[0, g0]) {
                    return vec![Root::Done(vec![0, g0])];
                }
                if k < 3 {
                    return vec![];
                }
                let mut out = Vec::new();
                for x1 in 1..self.n as u32 {
                    if x1 == g0 {
                        continue;
                    }
                    let low: Vec<u32> = (1..x1).filter(|&v| v != g0).collect();
                    let mut c = cand;
                    for &v in &low {
                        clear(&mut c, v as usize);
                    }
                    let mut s = vec![0u32];
                    let mut cov = empty;
                    if !self.include(&mut s, &mut cov, &mut c, g0, &low, x1) {
                        continue;
                    }
                    if !test(&c, x1 as usize) {
                        continue;
                    }
                    if !self.include(&mut s, &mut cov, &mut c, x1, &low, x1) {
                        continue;
                    }
                    out.push(Root::Task(Task {
                        s,
                        cov,
                        cand: c,
                        x1,
                        low,
                    }));
                }
                out
            }
        }
    }

    /// Adds `y` to `s`, updating coverage and candidates. Returns false when
    /// the normal-form constraint rules the node out.
    fn include<const W: usize>(
        &self,
        s: &mut Vec<u32>,
        cov: &mut [u64; W],
        cand: &mut [u64; W],
        y: u32,
        low: &[u32],
        x1: u32,
    ) -> bool {
        let n = self.n;
        let yu = y as usize;
        clear(cand, yu);
        for &x in s.iter() {
            let c = self.dcls[yu * n + x as usize];
            if c != NONE {
                set(cov, c as usize);
            }
        }
        if let Mode::Pair { .. } = self.mode {
            for &x in s.iter() {
                for (a, b) in [(y, x), (x, y)] {
                    let d = self.diff[a as usize * n + b as usize] as usize;
                    for &si in &self.to_g0[d] {
                        let sigma = &self.auts[si as usize];
                        let sinv = &self.aut_inv[si as usize];
                        for &c in s.iter().chain(std::iter::once(&y)) {
                            if c == a || c == b {
                                continue;
                            }
                            let v = sigma[self.diff[c as usize * n + b as usize] as usize];
                            if v < x1 && low.binary_search(&v).is_ok() {
                                return false;
                            }
                        }
                        for &v in low {
                            let c = self.mul[sinv[v as usize] as usize * n + b as usize];
                            clear(cand, c as usize);
                        }
                    }
                }
            }
        }
        s.push(y);
        true
    }
}

/// Multiplication and inverse tables over element keys.
fn key_tables(g: &GroupSpec) -> Result<(Vec<u32>, Vec<u32>)> {
    if g.order() > SOLVER_MAX_ORDER {
        return Err(Error::Limit {
            what: "group order for exact search",
            value: g.order() as u128,
            max: SOLVER_MAX_ORDER as usize,
        });
    }
    let n = g.order() as usize;
    let elems: Vec<GroupElement> = g.elements().collect();
    let mut mul = vec![0u32; n * n];
    if let Some(t) = g.table() {
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = t[a][b];
            }
        }
    } else {
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = g.key(&g.op(&elems[a], &elems[b])) as u32;
            }
        }
    }
    let inv = elems.iter().map(|x| g.key(&g.inverse(x)) as u32).collect();
    Ok((mul, inv))
}

fn set(b: &mut [u64], i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn clear(b: &mut [u64], i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn test(b: &[u64], i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn for_each_bit<const W: usize>(b: &[u64; W], mut f: impl FnMut(usize)) {
    for (w, &word) in b.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            let t = x.trailing_zeros() as usize;
            f(w * 64 + t);
            x &= x - 1;
        }
    }
}

pub(crate) struct Control {
    pub deadline: Instant,
    pub stop: AtomicBool,
    pub nodes: AtomicU64,
    pub workers: usize,
    pub split_depth: usize,
}

impl Control {
    pub(crate) fn new(budget_ms: u64, workers: usize, split_depth: usize) -> Self {
        Control {
            deadline: Instant::now() + Duration::from_millis(budget_ms),
            stop: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
            workers: workers.max(1),
            split_depth,
        }
    }
}

enum Root<const W: usize> {
    Done(Vec<u32>),
    Task(Task<W>),
}

struct Task<const W: usize> {
    s: Vec<u32>,
    cov: [u64; W],
    cand: [u64; W],
    x1: u32,
    low: Vec<u32>,
}

enum Flow {
    Continue,
    Found,
    Abort,
}

struct Worker<'a, const W: usize> {
    p: &'a Problem,
    ctl: &'a Control,
    k: usize,
    x1: u32,
    low: Vec<u32>,
    full: [u64; W],
    s: Vec<u32>,
    mark: Vec<u32>,
    stamp: u32,
    cnt: Vec<u32>,
    gains: Vec<Vec<(u32, u32)>>,
    hist: Vec<u32>,
    nodes: u64,
    task_index: usize,
    first_found: Option<&'a AtomicUsize>,
    collect: Option<(usize, Vec<Task<W>>)>,
}

impl<'a, const W: usize> Worker<'a, W> {
    fn new(p: &'a Problem, k: usize, ctl: &'a Control, t: &Task<W>) -> Self {
        Worker {
            p,
            ctl,
            k,
            x1: t.x1,
            low: t.low.clone(),
            full: p.full_mask::<W>(),
            s: t.s.clone(),
            mark: vec![0; p.ncls],
            stamp: 0,
            cnt: vec![0; p.ncls],
            gains: Vec::new(),
            hist: vec![0; k + 2],
            nodes: 0,
            task_index: 0,
            first_found: None,
            collect: None,
        }
    }

    fn run(&mut self, t: &Task<W>) -> Flow {
        self.s = t.s.clone();
        self.dfs(t.cov, t.cand, 0)
    }

    fn should_abort(&mut self) -> bool {
        if self.ctl.stop.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(ff) = self.first_found {
            if ff.load(Ordering::Relaxed) < self.task_index {
                return true;
            }
        }
        if Instant::now() >= self.ctl.deadline {
            self.ctl.stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn dfs(&mut self, cov: [u64; W], cand: [u64; W], level: usize) -> Flow {
        self.nodes += 1;
        if self.nodes & 0x3ff == 0 && self.should_abort() {
            return Flow::Abort;
        }
        let p = self.p;
        let n = p.n;
        let t = self.s.len();
        let mut uncovered = [0u64; W];
        let mut u = 0usize;
        for i in 0..W {
            uncovered[i] = self.full[i] & !cov[i];
            u += uncovered[i].count_ones() as usize;
        }
        if u == 0 {
            return Flow::Found;
        }
        if t >= self.k {
            return Flow::Continue;
        }
        if let Some((depth, tasks)) = &mut self.collect {
            if level == *depth {
                tasks.push(Task {
                    s: self.s.clone(),
                    cov,
                    cand,
                    x1: self.x1,
                    low: self.low.clone(),
                });
                return Flow::Continue;
            }
        }
        let m = self.k - t;
        let pairs = m * (m - 1) / 2;

        if self.gains.len() <= level {
            self.gains.resize_with(level + 1, Vec::new);
        }
        let mut gains = std::mem::take(&mut self.gains[level]);
        gains.clear();
        for h in self.hist.iter_mut() {
            *h = 0;
        }
        {
            let s = &self.s;
            let mark = &mut self.mark;
            let cnt = &mut self.cnt;
            let stamp = &mut self.stamp;
            let hist = &mut self.hist;
            for_each_bit(&cand, |y| {
                *stamp = stamp.wrapping_add(1);
                if *stamp == 0 {
                    mark.iter_mut().for_each(|v| *v = 0);
                    *stamp = 1;
                }
                let row = &p.dcls[y * n..y * n + n];
                let mut g = 0u32;
                for &x in s.iter() {
                    let c = row[x as usize];
                    if c != NONE && !test(&cov, c as usize) && mark[c as usize] != *stamp {
                        mark[c as usize] = *stamp;
                        cnt[c as usize] += 1;
                        g += 1;
                    }
                }
                gains.push((g, y as u32));
                let hi = hist.len() - 1;
                hist[(g as usize).min(hi)] += 1;
            });
        }

        let flow = self.branch(&cov, &cand, &uncovered, u, m, pairs, &mut gains, level);
        self.gains[level] = gains;
        flow
    }

    #[allow(clippy::too_many_arguments)]
    fn branch(
        &mut self,
        cov: &[u64; W],
        cand: &[u64; W],
        uncovered: &[u64; W],
        u: usize,
        m: usize,
        pairs: usize,
        gains: &mut [(u32, u32)],
        level: usize,
    ) -> Flow {
        let p = self.p;
        let n = p.n;
        // orphan classes and the branching class, resetting counts as we go
        let mut orphans = 0usize;
        let mut best: Option<(u32, usize)> = None;
        {
            let cnt = &mut self.cnt;
            for_each_bit(uncovered, |c| {
                let k = cnt[c];
                cnt[c] = 0;
                if k == 0 {
                    orphans += 1;
                } else if best.is_none_or(|(bk, _)| k < bk) {
                    best = Some((k, c));
                }
            });
        }
        if orphans > pairs {
            return Flow::Continue;
        }
        // sum of the m largest gains
        let mut top = 0usize;
        let mut left = m;
        for g in (0..self.hist.len()).rev() {
            if left == 0 {
                break;
            }
            let take = (self.hist[g] as usize).min(left);
            top += take * g;
            left -= take;
        }
        if top + pairs < u {
            return Flow::Continue;
        }
        if m == 1 {
            if let Some(&(_, y)) = gains.iter().find(|(g, _)| *g as usize == u) {
                let mut cv = *cov;
                let mut cd = *cand;
                let x1 = self.x1;
                let low = std::mem::take(&mut self.low);
                let ok = p.include(&mut self.s, &mut cv, &mut cd, y, &low, x1);
                self.low = low;
                if ok {
                    return Flow::Found;
                }
                // the normal form rejects this completion; others may remain
                for &(g, y2) in gains.iter() {
                    if g as usize == u && y2 != y {
                        let mut cv = *cov;
                        let mut cd = *cand;
                        let low = std::mem::take(&mut self.low);
                        let ok = p.include(&mut self.s, &mut cv, &mut cd, y2, &low, x1);
                        self.low = low;
                        if ok {
                            return Flow::Found;
                        }
                    }
                }
            }
            return Flow::Continue;
        }

        let mut forb = *cand;
        match best {
            None => {
                // every uncovered class needs a new pair: include/exclude the best candidate
                let &(_, y) = gains
                    .iter()
                    .max_by_key(|(g, y)| (*g, std::cmp::Reverse(*y)))
                    .expect("candidates remain when pairs can cover");
                match self.child(cov, &forb, y, level) {
                    Flow::Continue => {}
                    f => return f,
                }
                clear(&mut forb, y as usize);
                self.dfs(*cov, forb, level + 1)
            }
            Some((_, c)) => {
                let mut covering: Vec<(u32, u32)> = gains
                    .iter()
                    .filter(|&&(g, y)| {
                        g > 0
                            && self
                                .s
                                .iter()
                                .any(|&x| p.dcls[y as usize * n + x as usize] == c as u32)
                    })
                    .copied()
                    .collect();
                covering.sort_by_key(|&(g, y)| (std::cmp::Reverse(g), y));
                for &(_, y) in &covering {
                    match self.child(cov, &forb, y, level) {
                        Flow::Continue => {}
                        f => return f,
                    }
                    clear(&mut forb, y as usize);
                }
                if m >= 2 {
                    self.dfs(*cov, forb, level + 1)
                } else {
                    Flow::Continue
                }
            }
        }
    }

    fn child(&mut self, cov: &[u64; W], cand: &[u64; W], y: u32, level: usize) -> Flow {
        let mut cv = *cov;
        let mut cd = *cand;
        let low = std::mem::take(&mut self.low);
        let ok = self.p.include(&mut self.s, &mut cv, &mut cd, y, &low, self.x1);
        self.low = low;
        if !ok {
            return Flow::Continue;
        }
        let flow = self.dfs(cv, cd, level + 1);
        if let Flow::Found = flow {
            return flow;
        }
        self.s.pop();
        flow
    }
}

/// Lower bound for a target with `a2` involutions and `a_gt2` elements of
/// order above two: `k(k-1) >= a_gt2 + 2 a2`.
pub fn subset_lower_bound(g: &GroupSpec, target: &[GroupElement]) -> u64 {
    let mut a2 = 0u64;
    let mut agt = 0u64;
    let mut has_identity = false;
    for x in target {
        match element_order(g, x) {
            1 => has_identity = true,
            2 => a2 += 1,
            _ => agt += 1,
        }
    }
    let k = min_pairs_size(agt + 2 * a2);
    if k == 0 && has_identity {
        1
    } else {
        k
    }
}

fn certificate_from_keys(g: &GroupSpec, target: &Target, keys: &[u32], method: String) -> Certificate {
    let mut keys = keys.to_vec();
    keys.sort();
    Certificate::new(
        g.clone(),
        target.clone(),
        keys.iter().map(|&k| g.element(k as usize)).collect(),
        method,
    )
}

/// Exact minimum difference basis for `target` by iterative deepening from
/// the counting lower bound.
pub fn min_difference_basis(g: &GroupSpec, target: &Target, cfg: &SearchConfig) -> Result<OptimalResult> {
    let start = Instant::now();
    if cfg.worker_count == 0 || cfg.time_budget_ms == 0 {
        return Err(Error::Precondition("budget and worker count must be positive".into()));
    }
    let elems = target.resolve(g)?;
    let keys: Vec<usize> = elems.iter().map(|x| g.key(x)).collect();
    let lb = subset_lower_bound(g, &elems);
    let symmetry = if g.kind() == GroupKind::Generic && cfg.symmetry != SymmetryLevel::None {
        SymmetryLevel::Translation
    } else {
        cfg.symmetry
    };
    let problem = Problem::new(g, &keys, symmetry)?;
    let seed = match &cfg.seed {
        Some(c) if c.group == *g && problem_covers(&problem, g, c) => Some(c.clone()),
        Some(_) => return Err(Error::Precondition("seed certificate does not fit".into())),
        None => None,
    };
    let finish = |cert: Certificate, lower: u64, status: SearchStatus, nodes: u64| OptimalResult {
        delta: cert.size() as u64,
        lower,
        certificate: cert,
        status,
        nodes_explored: nodes,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    if lb == 0 {
        return Ok(finish(
            Certificate::new(g.clone(), target.clone(), vec![], "exact(empty)"),
            0,
            SearchStatus::ProvedOptimal,
            0,
        ));
    }
    let ctl = Control::new(cfg.time_budget_ms, cfg.worker_count, cfg.split_depth);
    let mut k = lb as usize;
    loop {
        if let Some(s) = &seed {
            if s.size() <= k {
                let nodes = ctl.nodes.load(Ordering::Relaxed);
                let mut cert = s.clone();
                cert.target = target.clone();
                return Ok(finish(cert, s.size() as u64, SearchStatus::ProvedOptimal, nodes));
            }
        }
        match problem.search(k, &ctl) {
            Outcome::Found(set) => {
                let nodes = ctl.nodes.load(Ordering::Relaxed);
                let cert = certificate_from_keys(g, target, &set, format!("exact(lb={lb})"));
                return Ok(finish(cert, set.len() as u64, SearchStatus::ProvedOptimal, nodes));
            }
            Outcome::Refuted => k += 1,
            Outcome::Timeout => {
                let nodes = ctl.nodes.load(Ordering::Relaxed);
                let greedy = problem.greedy();
                let cert = match seed {
                    Some(s) if s.size() <= greedy.len() => {
                        let mut s = s;
                        s.target = target.clone();
                        s
                    }
                    _ => certificate_from_keys(g, target, &greedy, "greedy".into()),
                };
                return Ok(finish(cert, k as u64, SearchStatus::UpperOnly, nodes));
            }
        }
    }
}

fn problem_covers(p: &Problem, g: &GroupSpec, c: &Certificate) -> bool {
    if c.basis.iter().any(|b| !g.contains(b)) {
        return false;
    }
    let keys: Vec<u32> = c.basis.iter().map(|b| g.key(b) as u32).collect();
    !keys.is_empty() && p.covers(&keys)
}

/// Convenience wrapper: `Δ[G]` for the whole group.
pub fn delta(g: &GroupSpec, cfg: &SearchConfig) -> Result<OptimalResult> {
    min_difference_basis(g, &Target::Full, cfg)
}
