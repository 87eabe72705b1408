//! Exhaustive search for the largest cyclic (`NC_{d,k}`) and Abelian
//! (`NA_{d,k}`) Cayley digraphs of degree `d` and diameter at most `k`.
//!
//! Orders are scanned downward from a ceiling; the first order admitting a
//! generating set of diameter `<= k` is the maximum. When the ceiling is a
//! proven upper bound the answer is exact and the result is marked
//! exhaustive.
//!
//! Cyclic generator sets are enumerated up to multiplication by units of
//! `Z_N` (an automorphism, hence a digraph isomorphism): only sets whose
//! sorted tuple is lexicographically minimal in their orbit are evaluated.
//! Work inside one order is split across threads by the smallest generator.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cayley::{bfs_layers, AbelianGroupSpec, CayleyDigraph};
use crate::error::{Error, Result};
use crate::families::{counting_bound, degree3_upper_bound};

/// Default cap on BFS vertex visits for one search.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Scan ceiling; `None` uses [`proven_upper`].
    pub upper: Option<u64>,
    /// Maximum BFS vertex visits before giving up.
    pub budget: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Witnesses kept in the result (all are counted).
    pub max_witnesses: usize,
    /// Also try generator multisets containing the identity or repeats.
    pub allow_degenerate: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            upper: None,
            budget: DEFAULT_BUDGET,
            threads: None,
            max_witnesses: 256,
            allow_degenerate: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub group: AbelianGroupSpec,
    pub generators: Vec<Vec<u64>>,
}

impl Witness {
    pub fn digraph(&self) -> CayleyDigraph {
        CayleyDigraph::from_reduced(self.group.clone(), self.generators.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.to_string(),
            "generators": self.generators,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub d: u64,
    pub k: u64,
    /// Largest order with a witness; 0 if none was found before the budget ran out.
    pub best_order: u64,
    pub witnesses: Vec<Witness>,
    /// Number of witnesses at `best_order`, including any not kept.
    pub witness_count: u64,
    /// Candidate generator sets evaluated by BFS.
    pub explored: u64,
    pub visits: u64,
    pub ceiling: u64,
    pub exhaustive: bool,
    pub budget_exceeded: bool,
}

impl SearchResult {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "k": self.k,
            "best": self.best_order,
            "exhaustive": self.exhaustive,
            "ceiling": self.ceiling,
            "explored": self.explored,
            "witness_count": self.witness_count,
            "witnesses": self.witnesses.iter().map(Witness::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `⌈(k+2)^2 / 3⌉ − 1`.
pub fn nc2_formula(k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::domain(format!(
            "the degree-2 formula needs k >= 2, got {k}"
        )));
    }
    Ok(((k + 2) * (k + 2)).div_ceil(3) - 1)
}

/// `NC_{2,k} + 1` if `k ≡ 1 (mod 3)`, else `NC_{2,k}`.
pub fn na2_formula(k: u64) -> Result<u64> {
    let nc = nc2_formula(k)?;
    Ok(if k % 3 == 1 { nc + 1 } else { nc })
}

/// Smallest proven upper bound on `NA_{d,k}` (and so on `NC_{d,k}`):
/// the counting bound `C(k+d, d)`, and for `d = 3` also `⌊3/25 (k+3)^3⌋`.
pub fn proven_upper(d: u64, k: u64) -> u64 {
    let counting = counting_bound(d, k).to_u64().unwrap_or(u64::MAX);
    if d == 3 {
        counting.min(degree3_upper_bound(k))
    } else {
        counting
    }
}

/// True iff the generators generate the group and the diameter is at most `k`.
pub fn verify_witness(g: &CayleyDigraph, k: u64) -> bool {
    matches!(g.distance_profile(), Ok(p) if p.diameter <= k)
}

/// Invariant-factor chains `1 < m_1 | m_2 | … | m_r` with product `n`, `r <= max_len`.
pub fn invariant_factor_chains(n: u64, max_len: usize) -> Vec<Vec<u64>> {
    fn rec(rem: u64, prev: u64, max_len: usize, chain: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 1 {
            out.push(chain.clone());
            return;
        }
        if chain.len() == max_len {
            return;
        }
        for f in (2..=rem).filter(|f| rem.is_multiple_of(*f) && f % prev == 0) {
            let rest = rem / f;
            if rest != 1 && !rest.is_multiple_of(f) {
                continue;
            }
            chain.push(f);
            rec(rest, f, max_len, chain, out);
            chain.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, max_len, &mut Vec::new(), &mut out);
    out
}

struct Counters {
    explored: AtomicU64,
    visits: AtomicU64,
    stop: AtomicBool,
    budget: u64,
}

impl Counters {
    fn new(budget: u64) -> Self {
        Counters {
            explored: AtomicU64::new(0),
            visits: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            budget,
        }
    }

    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    fn record(&self, visits: u64) {
        self.explored.fetch_add(1, Ordering::Relaxed);
        let total = self.visits.fetch_add(visits, Ordering::Relaxed) + visits;
        if total > self.budget {
            self.stop.store(true, Ordering::Relaxed);
        }
    }
}

/// Reusable BFS buffers for `Z_N`; `mark[v] == epoch` means visited.
struct CyclicScratch {
    mark: Vec<u32>,
    epoch: u32,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl CyclicScratch {
    fn new(n: u64) -> Self {
        CyclicScratch {
            mark: vec![0; n as usize],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Whether `Cay(Z_N, gens)` reaches every element within `k` steps.
    fn within(&mut self, n: u32, gens: &[u32], k: u64, visits: &mut u64) -> bool {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let e = self.epoch;
        self.frontier.clear();
        self.frontier.push(0);
        self.mark[0] = e;
        let mut reached = 1u32;
        let mut depth = 0u64;
        while reached < n && depth < k {
            self.next.clear();
            for &v in &self.frontier {
                for &g in gens {
                    let mut w = v + g;
                    if w >= n {
                        w -= n;
                    }
                    if self.mark[w as usize] != e {
                        self.mark[w as usize] = e;
                        self.next.push(w);
                    }
                }
            }
            if self.next.is_empty() {
                break;
            }
            reached += self.next.len() as u32;
            std::mem::swap(&mut self.frontier, &mut self.next);
            depth += 1;
        }
        *visits += reached as u64;
        reached == n
    }
}

/// `A` is minimal among the sorted tuples `u·A`, `u` a unit of `Z_n`.
fn is_multiplier_canonical(a: &[u32], n: u32, units: &[u32], buf: &mut Vec<u32>) -> bool {
    for &u in units {
        buf.clear();
        buf.extend(a.iter().map(|&x| ((x as u64 * u as u64) % n as u64) as u32));
        buf.sort_unstable();
        if buf.as_slice() < a {
            return false;
        }
    }
    true
}

fn binomial_f(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn run_in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn generator_count(n: u64, d: u64, degenerate: bool) -> u64 {
    if degenerate {
        d
    } else {
        d.min(n - 1)
    }
}

/// All canonical cyclic witnesses of order `n`, in lexicographic order.
fn cyclic_witnesses(n: u64, d: u64, k: u64, cfg: &SearchConfig, c: &Counters) -> Vec<Vec<u32>> {
    let size = generator_count(n, d, cfg.allow_degenerate);
    if size == 0 {
        return if n == 1 { vec![vec![0]] } else { Vec::new() };
    }
    if counting_bound(size, k).to_u64().is_some_and(|b| n > b) {
        return Vec::new();
    }
    let n32 = n as u32;
    let units: Vec<u32> = (2..n32).filter(|u| u.gcd(&n32) == 1).collect();
    let lo = if cfg.allow_degenerate { 0 } else { 1 };
    (lo..n32)
        .into_par_iter()
        .map_init(
            || (CyclicScratch::new(n), Vec::new()),
            |(scratch, buf), first| {
                let mut found = Vec::new();
                if c.stopped() {
                    return found;
                }
                let rest_lo = if cfg.allow_degenerate {
                    first
                } else {
                    first + 1
                };
                let tails: Box<dyn Iterator<Item = Vec<u32>>> = if cfg.allow_degenerate {
                    Box::new((rest_lo..n32).combinations_with_replacement(size as usize - 1))
                } else {
                    Box::new((rest_lo..n32).combinations(size as usize - 1))
                };
                for tail in tails {
                    if c.stopped() {
                        break;
                    }
                    let mut a = Vec::with_capacity(size as usize);
                    a.push(first);
                    a.extend(tail);
                    if a.iter().fold(n32, |g, &x| g.gcd(&x)) != 1 {
                        continue;
                    }
                    if !is_multiplier_canonical(&a, n32, &units, buf) {
                        continue;
                    }
                    let mut visits = 0;
                    let ok = scratch.within(n32, &a, k, &mut visits);
                    c.record(visits);
                    if ok {
                        found.push(a);
                    }
                }
                found
            },
        )
        .flatten_iter()
        .collect()
}

/// All witnesses over a non-cyclic group given by its invariant factors.
fn group_witnesses(
    radices: &[u64],
    d: u64,
    k: u64,
    cfg: &SearchConfig,
    c: &Counters,
) -> Vec<Vec<Vec<u64>>> {
    let n: u64 = radices.iter().product();
    let size = generator_count(n, d, cfg.allow_degenerate);
    if (radices.len() as u64) > size {
        return Vec::new();
    }
    if counting_bound(size, k).to_u64().is_some_and(|b| n > b) {
        return Vec::new();
    }
    let group = AbelianGroupSpec::new(radices.to_vec()).expect("valid factors");
    let probe = CayleyDigraph::from_reduced(group, vec![]);
    let elements: Vec<Vec<u64>> = (0..n).map(|i| probe.element(i)).collect();
    let lo = if cfg.allow_degenerate { 0 } else { 1 };
    (lo..n)
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            if c.stopped() {
                return found;
            }
            let rest_lo = if cfg.allow_degenerate {
                first
            } else {
                first + 1
            };
            let tails: Box<dyn Iterator<Item = Vec<u64>>> = if cfg.allow_degenerate {
                Box::new((rest_lo..n).combinations_with_replacement(size as usize - 1))
            } else {
                Box::new((rest_lo..n).combinations(size as usize - 1))
            };
            for tail in tails {
                if c.stopped() {
                    break;
                }
                let gens: Vec<Vec<u64>> = std::iter::once(first)
                    .chain(tail)
                    .map(|i| elements[i as usize].clone())
                    .collect();
                let mut visits = 0;
                let layers = bfs_layers(radices, &gens, Some(k as usize), &mut visits);
                c.record(visits);
                if layers.reachable == n {
                    found.push(gens);
                }
            }
            found
        })
        .flatten_iter()
        .collect()
}

fn validate(d: u64, k: u64, cfg: &SearchConfig) -> Result<u64> {
    if d < 1 || k < 1 {
        return Err(Error::domain(format!(
            "search needs d >= 1 and k >= 1, got d={d}, k={k}"
        )));
    }
    let ceiling = cfg.upper.unwrap_or_else(|| proven_upper(d, k));
    if ceiling < 1 {
        return Err(Error::domain("scan ceiling must be at least 1"));
    }
    if ceiling > u32::MAX as u64 {
        return Err(Error::too_large(ceiling, u32::MAX as u64));
    }
    Ok(ceiling)
}

fn scan(d: u64, k: u64, cfg: &SearchConfig, abelian: bool) -> Result<SearchResult> {
    let ceiling = validate(d, k, cfg)?;
    let counters = Counters::new(cfg.budget);
    let (best_order, mut witnesses) = run_in_pool(cfg.threads, || {
        for n in (1..=ceiling).rev() {
            let mut found: Vec<Witness> = cyclic_witnesses(n, d, k, cfg, &counters)
                .into_iter()
                .map(|a| Witness {
                    group: AbelianGroupSpec::cyclic(n).expect("n >= 1"),
                    generators: a.into_iter().map(|x| vec![x as u64]).collect(),
                })
                .collect();
            if abelian {
                for chain in invariant_factor_chains(n, d as usize) {
                    if chain.len() <= 1 || counters.stopped() {
                        continue;
                    }
                    let group = AbelianGroupSpec::new(chain.clone()).expect("valid factors");
                    found.extend(
                        group_witnesses(&chain, d, k, cfg, &counters)
                            .into_iter()
                            .map(|generators| Witness {
                                group: group.clone(),
                                generators,
                            }),
                    );
                }
            }
            if !found.is_empty() {
                return (n, found);
            }
            if counters.stopped() {
                break;
            }
        }
        (0, Vec::new())
    })?;
    let budget_exceeded = counters.stopped();
    let witness_count = witnesses.len() as u64;
    witnesses.truncate(cfg.max_witnesses);
    Ok(SearchResult {
        d,
        k,
        best_order,
        witnesses,
        witness_count,
        explored: counters.explored.load(Ordering::Relaxed),
        visits: counters.visits.load(Ordering::Relaxed),
        ceiling,
        exhaustive: !budget_exceeded && ceiling >= proven_upper(d, k),
        budget_exceeded,
    })
}

/// `NC_{d,k}`: the largest cyclic group with a `d`-generator Cayley digraph
/// of diameter at most `k`.
pub fn nc_search(d: u64, k: u64, cfg: &SearchConfig) -> Result<SearchResult> {
    scan(d, k, cfg, false)
}

/// `NA_{d,k}`: as [`nc_search`] over all Abelian groups of rank at most `d`.
pub fn na_search(d: u64, k: u64, cfg: &SearchConfig) -> Result<SearchResult> {
    scan(d, k, cfg, true)
}

/// Rough count of candidate sets a cyclic scan would enumerate (before pruning).
pub fn cyclic_search_size(d: u64, ceiling: u64) -> f64 {
    (1..=ceiling)
        .map(|n| binomial_f(n.saturating_sub(1), d.min(n.saturating_sub(1))))
        .sum()
}
