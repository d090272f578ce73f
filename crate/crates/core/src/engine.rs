//! The print/container construction.
//!
//! `print_of` and `container_of` are deterministic selectors for the print
//! and container relations, defined by recursion on the uniformity. For an
//! expanding fingerprint `F` the construction recurses into a fixed
//! homogeneous witness `G_F` inside the fiber `H_F`; the recursive engine for
//! `G_F` is built lazily and memoized by the sorted vertices of `F`, so the
//! container of a print never depends on which independent set produced it.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{canonical_vertex_set, power, Edge, Hypergraph, Vertex};
use crate::oracle::{BoundedOracle, GuardPolicy, DEFAULT_EXACT_CAP};
use crate::params::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Refuse to run when the hypotheses fail or the exact oracle is refused.
    Strict,
    /// Run anyway; greedy oracle fallbacks mark the run as heuristic.
    #[default]
    Permissive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Permissive => "permissive",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    pub mode: Mode,
    pub exact_cap: usize,
    /// Reject non-independent inputs to `print_of`.
    pub check_independence: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Mode::Permissive,
            exact_cap: DEFAULT_EXACT_CAP,
            check_independence: cfg!(debug_assertions),
        }
    }
}

/// A sequence of at most `k-1` fingerprints, each sorted ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Print(Vec<Vec<Vertex>>);

impl Print {
    pub fn new(fingerprints: Vec<Vec<Vertex>>) -> Self {
        Print(
            fingerprints
                .into_iter()
                .map(|mut f| {
                    f.sort_unstable();
                    f.dedup();
                    f
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Print(Vec::new())
    }

    pub fn fingerprints(&self) -> &[Vec<Vertex>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self) -> Vec<Vertex> {
        let all: BTreeSet<Vertex> = self.0.iter().flatten().copied().collect();
        all.into_iter().collect()
    }

    fn tail(&self) -> Print {
        Print(self.0[1..].to_vec())
    }

    fn prepend(mut self, head: Vec<Vertex>) -> Print {
        self.0.insert(0, head);
        self
    }
}

impl fmt::Display for Print {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, fp) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{{{}}}", fp.iter().join(" "))?;
        }
        f.write_str(")")
    }
}

struct Child {
    witness: Hypergraph,
    engine: Engine,
}

/// One level of the construction: a hypergraph, its parameters and the
/// lazily built engines for the homogeneous witnesses of its fibers.
pub struct Engine {
    hypergraph: Hypergraph,
    params: Params,
    config: EngineConfig,
    oracle: Arc<BoundedOracle>,
    incidence: Vec<Vec<usize>>,
    children: RwLock<HashMap<Vec<Vertex>, Arc<Child>>>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("n", &self.hypergraph.n())
            .field("k", &self.hypergraph.k())
            .field("edges", &self.hypergraph.len())
            .field("params", &self.params)
            .field("config", &self.config)
            .finish()
    }
}

impl Engine {
    pub fn new(hypergraph: Hypergraph, params: Params, config: EngineConfig) -> Result<Self> {
        if params.k != hypergraph.k() {
            return Err(Error::ParamsMismatch {
                what: "k",
                params: params.k,
                hypergraph: hypergraph.k(),
            });
        }
        if params.n != hypergraph.n() {
            return Err(Error::ParamsMismatch {
                what: "n",
                params: params.n,
                hypergraph: hypergraph.n(),
            });
        }
        if config.mode == Mode::Strict && !params.hypotheses_hold() {
            let mut failed = Vec::new();
            if !params.hyp_eps_ok {
                failed.push(format!(
                    "eps = {} < 2k log_n 2 = {}",
                    params.eps,
                    2.0 * params.k as f64 * params.log2
                ));
            }
            if !params.hyp_pi_ok {
                failed.push(format!(
                    "pi = {} < (k-1) log_n 2 = {}",
                    params.pi,
                    (params.k as f64 - 1.0) * params.log2
                ));
            }
            return Err(Error::HypothesisFailed(failed.join("; ")));
        }
        let policy = match config.mode {
            Mode::Strict => GuardPolicy::Refuse,
            Mode::Permissive => GuardPolicy::FallBackToGreedy,
        };
        let oracle = Arc::new(BoundedOracle::new(config.exact_cap, policy));
        Ok(Self::with_oracle(hypergraph, params, config, oracle))
    }

    fn with_oracle(
        hypergraph: Hypergraph,
        params: Params,
        config: EngineConfig,
        oracle: Arc<BoundedOracle>,
    ) -> Self {
        let incidence = hypergraph.incidence();
        Engine {
            hypergraph,
            params,
            config,
            oracle,
            incidence,
            children: RwLock::new(HashMap::new()),
        }
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn oracle(&self) -> &BoundedOracle {
        &self.oracle
    }

    /// Whether any oracle call so far, at any level, used the greedy fallback.
    pub fn heuristic(&self) -> bool {
        self.oracle.heuristic_fired()
    }

    fn k(&self) -> usize {
        self.hypergraph.k()
    }

    fn n(&self) -> usize {
        self.hypergraph.n()
    }

    fn checked_fingerprint(&self, f: &[Vertex]) -> Result<Vec<Vertex>> {
        let f = canonical_vertex_set(f, self.n())?;
        if !self.params.is_fingerprint(f.len()) {
            return Err(Error::NotFingerprint {
                size: f.len(),
                bound: self.params.fingerprint_bound(),
            });
        }
        Ok(f)
    }

    fn add_link(&self, x: Vertex, fiber: &mut BTreeSet<Edge>) {
        for &i in &self.incidence[x as usize] {
            let e = &self.hypergraph.edges()[i];
            fiber.insert(e.iter().copied().filter(|&v| v != x).collect());
        }
    }

    fn fiber_set(&self, f: &[Vertex]) -> BTreeSet<Edge> {
        let mut fiber = BTreeSet::new();
        for &x in f {
            self.add_link(x, &mut fiber);
        }
        fiber
    }

    fn fiber_capacity(&self, fiber: &BTreeSet<Edge>) -> Result<usize> {
        if self.k() == 2 {
            return Ok(fiber.len());
        }
        let hp = Hypergraph::from_edge_set(self.n(), self.k() - 1, fiber.clone());
        self.oracle.capacity(&hp, self.params.delta_p)
    }

    fn expanding_bar(&self) -> f64 {
        power(self.n(), self.params.expanding_exponent())
    }

    fn per_vertex_bar(&self) -> f64 {
        power(self.n(), self.params.per_vertex_exponent())
    }

    /// Whether a `pi`-fingerprint is expanding at this level.
    pub fn is_expanding(&self, f: &[Vertex]) -> Result<bool> {
        if self.k() < 2 {
            return Err(Error::LevelOutOfRange { level: 1, k: self.k() });
        }
        let f = self.checked_fingerprint(f)?;
        let cap = self.fiber_capacity(&self.fiber_set(&f))?;
        Ok(cap as f64 >= self.expanding_bar())
    }

    fn child(&self, f: &[Vertex]) -> Result<Arc<Child>> {
        if let Some(c) = self.children.read().expect("memo poisoned").get(f) {
            return Ok(Arc::clone(c));
        }
        let fiber = Hypergraph::from_edge_set(self.n(), self.k() - 1, self.fiber_set(f));
        let witness = self
            .oracle
            .max_bounded(&fiber, self.params.delta_p)?
            .sub
            .clone();
        let params = self.params.for_fibers();
        debug_assert!(
            !self.params.hypotheses_hold() || params.hypotheses_hold(),
            "hypotheses must survive the descent"
        );
        let engine = Engine::with_oracle(
            witness.clone(),
            params,
            self.config,
            Arc::clone(&self.oracle),
        );
        let child = Arc::new(Child { witness, engine });
        let mut memo = self.children.write().expect("memo poisoned");
        Ok(Arc::clone(memo.entry(f.to_vec()).or_insert(child)))
    }

    /// The fixed `(delta', eps')`-homogeneous witness `G_F` inside `H_F`.
    pub fn homogeneous_witness(&self, f: &[Vertex]) -> Result<Hypergraph> {
        let f = self.checked_fingerprint(f)?;
        if !self.is_expanding(&f)? {
            return Err(Error::NotExpanding { fingerprint: f });
        }
        Ok(self.child(&f)?.witness.clone())
    }

    /// The engine that handles prints continuing below the expanding `f`.
    pub fn fiber_engine(&self, f: &[Vertex]) -> Result<EngineRef> {
        let f = self.checked_fingerprint(f)?;
        if !self.is_expanding(&f)? {
            return Err(Error::NotExpanding { fingerprint: f });
        }
        Ok(EngineRef(self.child(&f)?))
    }

    /// The print selected for an independent set.
    ///
    /// Grows `F` inside `I` in ascending vertex order, in repeated passes,
    /// adding `x` whenever `F + x` is still a fingerprint and satisfies the
    /// expansive inequality. The first time `F` becomes expanding the print
    /// continues recursively inside `G_F`; otherwise the fixpoint `F` is the
    /// whole print.
    pub fn print_of(&self, independent: &[Vertex]) -> Result<Print> {
        let set = canonical_vertex_set(independent, self.n())?;
        if self.config.check_independence {
            if let Some(edge) = self.hypergraph.violated_edge(&set) {
                return Err(Error::NotIndependent { edge: edge.clone() });
            }
        }
        if self.k() == 1 {
            return Ok(Print::empty());
        }
        let per_vertex = self.per_vertex_bar();
        let expanding = self.expanding_bar();
        let mut taken = vec![false; set.len()];
        let mut fingerprint: Vec<Vertex> = Vec::new();
        let mut grower = FiberGrower::new(self);
        'grow: loop {
            let mut grew = false;
            for (idx, &x) in set.iter().enumerate() {
                if taken[idx] {
                    continue;
                }
                let size = fingerprint.len() + 1;
                if !self.params.is_fingerprint(size) {
                    break 'grow;
                }
                let cap = grower.capacity_with(self, x)?;
                if cap as f64 >= size as f64 * per_vertex {
                    grower.commit(self, x);
                    taken[idx] = true;
                    fingerprint.push(x);
                    grew = true;
                    if cap as f64 >= expanding {
                        fingerprint.sort_unstable();
                        let child = self.child(&fingerprint)?;
                        let tail = child.engine.print_of(&set)?;
                        return Ok(tail.prepend(fingerprint));
                    }
                }
            }
            if !grew {
                break;
            }
        }
        fingerprint.sort_unstable();
        Ok(Print(vec![fingerprint]))
    }

    /// `(H^-, H^)` for the fingerprint `f`: `H^` holds the edges meeting the
    /// fiber `H_F` in `k-1` vertices or containing a high-degree set of it.
    pub fn h_minus(&self, f: &[Vertex]) -> Result<(Hypergraph, Hypergraph)> {
        if self.k() < 2 {
            return Err(Error::LevelOutOfRange { level: 1, k: self.k() });
        }
        let f = canonical_vertex_set(f, self.n())?;
        let hat = self.hat_mask(&f)?;
        let (mut minus, mut hat_edges) = (Vec::new(), Vec::new());
        for (e, &in_hat) in self.hypergraph.edges().iter().zip(&hat) {
            if in_hat {
                hat_edges.push(e.clone());
            } else {
                minus.push(e.clone());
            }
        }
        Ok((
            Hypergraph::from_canonical(self.n(), self.k(), minus),
            Hypergraph::from_canonical(self.n(), self.k(), hat_edges),
        ))
    }

    /// Membership of each edge in `H^`.
    fn hat_mask(&self, f: &[Vertex]) -> Result<Vec<bool>> {
        let edges = self.hypergraph.edges();
        if self.k() == 2 {
            let mut in_fiber = vec![false; self.n()];
            for &x in f {
                for &i in &self.incidence[x as usize] {
                    for &v in &edges[i] {
                        if v != x {
                            in_fiber[v as usize] = true;
                        }
                    }
                }
            }
            return Ok(edges
                .iter()
                .map(|e| in_fiber[e[0] as usize] || in_fiber[e[1] as usize])
                .collect());
        }
        let fiber_set = self.fiber_set(f);
        let fiber = Hypergraph::from_edge_set(self.n(), self.k() - 1, fiber_set.clone());
        let mut high: Vec<HashSet<Edge>> = vec![HashSet::new()];
        for t in 1..self.k() - 1 {
            high.push(fiber.nabla(t, self.params.delta)?.into_iter().collect());
        }
        Ok(edges
            .iter()
            .map(|e| {
                e.iter()
                    .copied()
                    .combinations(self.k() - 1)
                    .any(|v| fiber_set.contains(&v))
                    || (1..self.k() - 1).any(|t| {
                        !high[t].is_empty()
                            && e.iter().copied().combinations(t).any(|u| high[t].contains(&u))
                    })
            })
            .collect())
    }

    /// The container selected for a print produced by [`Engine::print_of`].
    pub fn container_of(&self, print: &Print) -> Result<Vec<Vertex>> {
        if self.k() == 1 {
            if !print.is_empty() {
                return Err(Error::PrintOutsideDomain(format!(
                    "1-uniform level takes only the empty print, got {print}"
                )));
            }
            let covered = self.hypergraph.vertex_union();
            return Ok(complement(&covered, self.n()));
        }
        let Some(head) = print.fingerprints().first() else {
            return Err(Error::PrintOutsideDomain(format!(
                "empty print at uniformity {}",
                self.k()
            )));
        };
        let head = self.checked_fingerprint(head)?;
        if self.is_expanding(&head)? {
            let child = self.child(&head)?;
            return child.engine.container_of(&print.tail());
        }
        if print.len() != 1 {
            return Err(Error::PrintOutsideDomain(format!(
                "non-expanding head {{{}}} must end the print {print}",
                head.iter().join(" ")
            )));
        }
        Ok(self.low_degree_container(&head)?.1)
    }

    /// `(|H^-|, C)` for a non-expanding fingerprint: `C` holds the vertices
    /// whose `H^-`-degree is strictly below `n^{(k-1) delta' - eps~}`.
    fn low_degree_container(&self, f: &[Vertex]) -> Result<(usize, Vec<Vertex>)> {
        let hat = self.hat_mask(f)?;
        let mut deg = vec![0usize; self.n()];
        let mut minus = 0;
        for (e, &in_hat) in self.hypergraph.edges().iter().zip(&hat) {
            if !in_hat {
                minus += 1;
                for &v in e {
                    deg[v as usize] += 1;
                }
            }
        }
        let bar = self.per_vertex_bar();
        let container = (0..self.n() as Vertex)
            .filter(|&x| (deg[x as usize] as f64) < bar)
            .collect();
        Ok((minus, container))
    }

    /// `|H^-|` for a fingerprint, without materializing `H^-`.
    pub fn h_minus_size(&self, f: &[Vertex]) -> Result<usize> {
        let f = canonical_vertex_set(f, self.n())?;
        Ok(self.low_degree_container(&f)?.0)
    }
}

/// Shared handle to a recursive engine.
pub struct EngineRef(Arc<Child>);

impl std::ops::Deref for EngineRef {
    type Target = Engine;
    fn deref(&self) -> &Engine {
        &self.0.engine
    }
}

/// Tracks `H_F` while `F` grows. At `k = 2` the fiber is a vertex set and is
/// kept as a bitmap; higher uniformities keep the edge set.
enum FiberGrower {
    Vertices { member: Vec<bool>, count: usize },
    Edges(BTreeSet<Edge>),
}

impl FiberGrower {
    fn new(engine: &Engine) -> Self {
        if engine.k() == 2 {
            FiberGrower::Vertices {
                member: vec![false; engine.n()],
                count: 0,
            }
        } else {
            FiberGrower::Edges(BTreeSet::new())
        }
    }

    fn capacity_with(&self, engine: &Engine, x: Vertex) -> Result<usize> {
        match self {
            FiberGrower::Vertices { member, count } => {
                let edges = engine.hypergraph.edges();
                let mut seen: Vec<Vertex> = engine.incidence[x as usize]
                    .iter()
                    .map(|&i| {
                        let e = &edges[i];
                        if e[0] == x {
                            e[1]
                        } else {
                            e[0]
                        }
                    })
                    .filter(|&v| !member[v as usize])
                    .collect();
                seen.sort_unstable();
                seen.dedup();
                Ok(count + seen.len())
            }
            FiberGrower::Edges(fiber) => {
                let mut next = fiber.clone();
                engine.add_link(x, &mut next);
                engine.fiber_capacity(&next)
            }
        }
    }

    fn commit(&mut self, engine: &Engine, x: Vertex) {
        match self {
            FiberGrower::Vertices { member, count } => {
                let edges = engine.hypergraph.edges();
                for &i in &engine.incidence[x as usize] {
                    for &v in &edges[i] {
                        if v != x && !member[v as usize] {
                            member[v as usize] = true;
                            *count += 1;
                        }
                    }
                }
            }
            FiberGrower::Edges(fiber) => engine.add_link(x, fiber),
        }
    }
}

pub(crate) fn complement(set: &[Vertex], n: usize) -> Vec<Vertex> {
    let mut member = vec![false; n];
    for &v in set {
        member[v as usize] = true;
    }
    (0..n as Vertex).filter(|&v| !member[v as usize]).collect()
}
