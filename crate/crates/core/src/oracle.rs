//! Maximum `delta`-bounded subhypergraphs.
//!
//! The exact solver is a branch-and-bound over edges in canonical order
//! (include before exclude), run separately on each connected component.
//! Among maximum witnesses it returns the lexicographically least edge
//! subset. Components that are already bounded are taken whole without
//! search; only components that need a search count against the size guard.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, RwLock};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{power, Edge, Hypergraph, Vertex};
use crate::params::Params;

pub const DEFAULT_EXACT_CAP: usize = 24;

/// A `delta`-bounded subhypergraph of a queried hypergraph.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedWitness {
    pub sub: Hypergraph,
    pub delta: f64,
    /// Certified maximum, as opposed to a greedy lower bound.
    pub exact: bool,
}

impl BoundedWitness {
    pub fn size(&self) -> usize {
        self.sub.len()
    }
}

/// Integer degree caps per level: index `l` holds `floor(n^{(k-l) delta})`.
fn level_caps(n: usize, k: usize, delta: f64) -> Vec<usize> {
    (0..k)
        .map(|level| {
            if level == 0 {
                return usize::MAX;
            }
            let cap = power(n, (k - level) as f64 * delta).floor();
            if cap >= usize::MAX as f64 {
                usize::MAX
            } else {
                cap as usize
            }
        })
        .collect()
}

/// Interned sub-`l`-sets of each edge, `1 <= l < k`.
struct Slots {
    per_edge: Vec<Vec<usize>>,
    cap: Vec<usize>,
    /// Slot ids of singletons, with the level-1 cap.
    singletons: Vec<usize>,
}

impl Slots {
    fn build(edges: &[&Edge], n: usize, k: usize, delta: f64) -> Self {
        let caps = level_caps(n, k, delta);
        let mut ids: HashMap<Vec<Vertex>, usize> = HashMap::new();
        let mut cap = Vec::new();
        let mut singletons = Vec::new();
        let per_edge = edges
            .iter()
            .map(|e| {
                let mut slots = Vec::new();
                for (level, &level_cap) in caps.iter().enumerate().take(k).skip(1) {
                    for sub in e.iter().copied().combinations(level) {
                        let next = cap.len();
                        let id = *ids.entry(sub).or_insert(next);
                        if id == next {
                            cap.push(level_cap);
                            if level == 1 {
                                singletons.push(id);
                            }
                        }
                        slots.push(id);
                    }
                }
                slots
            })
            .collect();
        Slots {
            per_edge,
            cap,
            singletons,
        }
    }
}

/// Keeps each edge, in the given order, iff it breaks no degree cap.
fn greedy_select<'a>(
    edges: impl IntoIterator<Item = (usize, &'a Edge)>,
    n: usize,
    k: usize,
    delta: f64,
) -> Vec<usize> {
    let caps = level_caps(n, k, delta);
    let mut load: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut kept = Vec::new();
    for (idx, e) in edges {
        let subs: Vec<Vec<Vertex>> = (1..k)
            .flat_map(|level| e.iter().copied().combinations(level))
            .collect();
        let fits = subs
            .iter()
            .all(|s| load.get(s).copied().unwrap_or(0) < caps[s.len()]);
        if fits {
            for s in subs {
                *load.entry(s).or_insert(0) += 1;
            }
            kept.push(idx);
        }
    }
    kept
}

/// Greedy lower bound: scan edges in canonical order, keep an edge iff it
/// violates no degree cap.
pub fn greedy_bounded_sub(hp: &Hypergraph, delta: f64) -> BoundedWitness {
    greedy_bounded_in_order(hp, delta, 0..hp.len())
}

/// Greedy scan in a caller-chosen edge order.
pub fn greedy_bounded_in_order(
    hp: &Hypergraph,
    delta: f64,
    order: impl IntoIterator<Item = usize>,
) -> BoundedWitness {
    let kept = greedy_select(
        order.into_iter().map(|i| (i, &hp.edges()[i])),
        hp.n(),
        hp.k(),
        delta,
    );
    BoundedWitness {
        sub: hp.select(kept),
        delta,
        exact: false,
    }
}

/// Exact maximum `delta`-bounded subhypergraph, lexicographically least among
/// maxima. Fails with [`Error::OracleGuard`] when a component that needs a
/// search has more than `exact_cap` edges.
pub fn max_bounded_sub(hp: &Hypergraph, delta: f64, exact_cap: usize) -> Result<BoundedWitness> {
    let whole = BoundedWitness {
        sub: hp.clone(),
        delta,
        exact: true,
    };
    if hp.k() < 2 || hp.is_bounded(delta) {
        return Ok(whole);
    }
    let mut keep = Vec::with_capacity(hp.len());
    for component in components(hp) {
        let edges: Vec<&Edge> = component.iter().map(|&i| &hp.edges()[i]).collect();
        let sub = Hypergraph::from_canonical(
            hp.n(),
            hp.k(),
            edges.iter().map(|e| (*e).clone()).collect(),
        );
        if sub.is_bounded(delta) {
            keep.extend(component);
            continue;
        }
        if component.len() > exact_cap {
            return Err(Error::OracleGuard {
                edges: component.len(),
                cap: exact_cap,
            });
        }
        let chosen = BranchAndBound::new(&edges, hp.n(), hp.k(), delta).run();
        keep.extend(chosen.into_iter().map(|j| component[j]));
    }
    keep.sort_unstable();
    Ok(BoundedWitness {
        sub: hp.select(keep),
        delta,
        exact: true,
    })
}

/// Edge indices grouped by connected component, each group ascending.
fn components(hp: &Hypergraph) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..hp.n()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in hp.edges() {
        let a = find(&mut parent, e[0] as usize);
        for &v in &e[1..] {
            let b = find(&mut parent, v as usize);
            if a != b {
                parent[b] = a;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut slot_of_root: HashMap<usize, usize> = HashMap::new();
    for (i, e) in hp.edges().iter().enumerate() {
        let root = find(&mut parent, e[0] as usize);
        let slot = *slot_of_root.entry(root).or_insert_with(|| {
            groups.push((root, Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(i);
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

struct BranchAndBound {
    slots: Slots,
    k: usize,
    load: Vec<usize>,
    /// Edges at index >= the current one touching each slot.
    remaining: Vec<usize>,
    chosen: Vec<bool>,
    count: usize,
    best: Vec<bool>,
    best_count: usize,
}

impl BranchAndBound {
    fn new(edges: &[&Edge], n: usize, k: usize, delta: f64) -> Self {
        let slots = Slots::build(edges, n, k, delta);
        let mut remaining = vec![0; slots.cap.len()];
        for per in &slots.per_edge {
            for &s in per {
                remaining[s] += 1;
            }
        }
        let m = edges.len();
        BranchAndBound {
            load: vec![0; slots.cap.len()],
            slots,
            k,
            remaining,
            chosen: vec![false; m],
            count: 0,
            best: vec![false; m],
            best_count: 0,
        }
    }

    fn run(mut self) -> Vec<usize> {
        self.descend(0);
        self.best
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    fn upper_bound(&self, from: usize) -> usize {
        let by_count = self.chosen.len() - from;
        let slack: usize = self
            .slots
            .singletons
            .iter()
            .map(|&s| {
                self.slots.cap[s]
                    .saturating_sub(self.load[s])
                    .min(self.remaining[s])
            })
            .sum();
        by_count.min(slack / self.k)
    }

    fn fits(&self, i: usize) -> bool {
        self.slots.per_edge[i]
            .iter()
            .all(|&s| self.load[s] < self.slots.cap[s])
    }

    fn descend(&mut self, i: usize) {
        if self.count > self.best_count {
            self.best_count = self.count;
            self.best.clone_from(&self.chosen);
        }
        if i == self.chosen.len() || self.count + self.upper_bound(i) <= self.best_count {
            return;
        }
        for idx in 0..self.slots.per_edge[i].len() {
            let s = self.slots.per_edge[i][idx];
            self.remaining[s] -= 1;
        }
        if self.fits(i) {
            for idx in 0..self.slots.per_edge[i].len() {
                let s = self.slots.per_edge[i][idx];
                self.load[s] += 1;
            }
            self.chosen[i] = true;
            self.count += 1;
            self.descend(i + 1);
            self.count -= 1;
            self.chosen[i] = false;
            for idx in 0..self.slots.per_edge[i].len() {
                let s = self.slots.per_edge[i][idx];
                self.load[s] -= 1;
            }
        }
        self.descend(i + 1);
        for idx in 0..self.slots.per_edge[i].len() {
            let s = self.slots.per_edge[i][idx];
            self.remaining[s] += 1;
        }
    }
}

/// What to do when the exact search is refused by the size guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuardPolicy {
    Refuse,
    FallBackToGreedy,
}

type MemoKey = (Hypergraph, u64);

/// Memoizing front end to the bounded-subhypergraph solvers. Identical
/// queries always return identical witnesses, whatever the call order.
#[derive(Debug)]
pub struct BoundedOracle {
    exact_cap: usize,
    policy: GuardPolicy,
    memo: RwLock<HashMap<MemoKey, Arc<BoundedWitness>>>,
    heuristic: AtomicBool,
}

impl BoundedOracle {
    pub fn new(exact_cap: usize, policy: GuardPolicy) -> Self {
        BoundedOracle {
            exact_cap,
            policy,
            memo: RwLock::new(HashMap::new()),
            heuristic: AtomicBool::new(false),
        }
    }

    pub fn exact_cap(&self) -> usize {
        self.exact_cap
    }

    /// Whether any query fell back to the greedy lower bound.
    pub fn heuristic_fired(&self) -> bool {
        self.heuristic.load(Ordering::Relaxed)
    }

    pub fn max_bounded(&self, hp: &Hypergraph, delta: f64) -> Result<Arc<BoundedWitness>> {
        if hp.k() < 2 || hp.is_empty() {
            return Ok(Arc::new(BoundedWitness {
                sub: hp.clone(),
                delta,
                exact: true,
            }));
        }
        let key = (hp.clone(), delta.to_bits());
        if let Some(hit) = self.memo.read().expect("memo poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let witness = match max_bounded_sub(hp, delta, self.exact_cap) {
            Ok(w) => w,
            Err(Error::OracleGuard { .. }) if self.policy == GuardPolicy::FallBackToGreedy => {
                self.heuristic.store(true, Ordering::Relaxed);
                greedy_bounded_sub(hp, delta)
            }
            Err(e) => return Err(e),
        };
        let mut memo = self.memo.write().expect("memo poisoned");
        Ok(Arc::clone(memo.entry(key).or_insert_with(|| Arc::new(witness))))
    }

    /// `|hp|_delta`; 1-uniform hypergraphs answer without touching the memo.
    pub fn capacity(&self, hp: &Hypergraph, delta: f64) -> Result<usize> {
        if hp.k() < 2 {
            return Ok(hp.len());
        }
        Ok(self.max_bounded(hp, delta)?.size())
    }

    fn fiber_capacity(&self, h: &Hypergraph, f: &[Vertex], p: &Params) -> Result<usize> {
        let fiber = h.fiber_of_vertices(f)?;
        self.capacity(&fiber, p.delta_p)
    }

    /// `log |H_F|_{delta'} >= 1 + (k-2) delta' - eps'` for a `pi`-fingerprint `F`.
    pub fn is_expanding(&self, h: &Hypergraph, f: &[Vertex], p: &Params) -> Result<bool> {
        if !p.is_fingerprint(f.len()) {
            return Err(Error::NotFingerprint {
                size: f.len(),
                bound: p.fingerprint_bound(),
            });
        }
        let cap = self.fiber_capacity(h, f, p)?;
        Ok(cap as f64 >= power(p.n, p.expanding_exponent()))
    }

    /// `|H_F|_{delta'} >= |F| n^{(k-1) delta' - eps~}`.
    pub fn satisfies_expansive(&self, h: &Hypergraph, f: &[Vertex], p: &Params) -> Result<bool> {
        let cap = self.fiber_capacity(h, f, p)?;
        Ok(cap as f64 >= f.len() as f64 * power(p.n, p.per_vertex_exponent()))
    }
}
