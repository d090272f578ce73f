//! Uniform hypergraphs on `{0, .., n-1}` and the degree machinery built on them.
//!
//! Every size comparison of the form `log_n |S| >= tau` is evaluated in the
//! linear domain as `|S| as f64 >= n^tau`. The left side is an exact integer;
//! results can only flip when `|S|` lies within one ulp of `n^tau`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A strictly ascending vertex sequence.
pub type Edge = Vec<Vertex>;

/// `n^exponent` in double precision. A `-inf` exponent yields `0`.
/// `C(n, k)`, zero when `k > n`.
pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

pub fn power(n: usize, exponent: f64) -> f64 {
    (n as f64).powf(exponent)
}

/// `log_n count >= exponent`, with `log 0 = -inf`.
pub fn count_at_least(count: usize, n: usize, exponent: f64) -> bool {
    count as f64 >= power(n, exponent)
}

/// Logarithm of a set size in base `n`; the empty set maps to `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogSize(f64);

impl LogSize {
    pub const NEG_INFINITY: LogSize = LogSize(f64::NEG_INFINITY);

    pub fn of_count(count: usize, n: usize) -> Self {
        if count == 0 {
            Self::NEG_INFINITY
        } else {
            LogSize((count as f64).ln() / (n as f64).ln())
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_neg_infinity(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl fmt::Display for LogSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg_infinity() {
            f.write_str("-inf")
        } else {
            f.write_str(&crate::report::fmt_real(self.0))
        }
    }
}

/// A `k`-uniform hypergraph with canonically sorted, duplicate-free edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if n < 2 {
            return Err(Error::TooFewVertices { n });
        }
        if k == 0 {
            return Err(Error::ZeroUniformity);
        }
        let mut canon = BTreeSet::new();
        for edge in edges {
            canon.insert(checked_set(edge.as_ref(), n, k)?);
        }
        Ok(Hypergraph {
            n,
            k,
            edges: canon.into_iter().collect(),
        })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, std::iter::empty::<Edge>())
    }

    /// Caller guarantees the edges are valid, sorted and deduplicated.
    pub(crate) fn from_canonical(n: usize, k: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|e| e.len() == k));
        Hypergraph { n, k, edges }
    }

    pub(crate) fn from_edge_set(n: usize, k: usize, edges: BTreeSet<Edge>) -> Self {
        Self::from_canonical(n, k, edges.into_iter().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: &[Vertex]) -> bool {
        self.edges
            .binary_search_by(|e| e.as_slice().cmp(edge))
            .is_ok()
    }

    pub fn log_size(&self) -> LogSize {
        LogSize::of_count(self.len(), self.n)
    }

    /// The vertices covered by at least one edge.
    pub fn vertex_union(&self) -> Vec<Vertex> {
        let covered: BTreeSet<Vertex> = self.edges.iter().flatten().copied().collect();
        covered.into_iter().collect()
    }

    /// Indices of the edges containing each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    /// The first edge lying inside `set`, if any.
    pub fn violated_edge(&self, set: &[Vertex]) -> Option<&Edge> {
        let mut member = vec![false; self.n];
        for &v in set {
            if let Some(m) = member.get_mut(v as usize) {
                *m = true;
            }
        }
        self.edges
            .iter()
            .find(|e| e.iter().all(|&v| member[v as usize]))
    }

    pub fn is_independent(&self, set: &[Vertex]) -> bool {
        self.violated_edge(set).is_none()
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level >= self.k {
            return Err(Error::LevelOutOfRange { level, k: self.k });
        }
        Ok(())
    }

    /// Fiber over a family of `l`-sets: all `(k-l)`-sets `v` with `u | v` an
    /// edge for some `u` in the family, `u` and `v` disjoint.
    pub fn fiber(&self, family: &[Edge]) -> Result<Hypergraph> {
        let Some(first) = family.first() else {
            // an empty family has no arity; the result is empty at any level
            return Hypergraph::empty(self.n, self.k.saturating_sub(1).max(1));
        };
        let level = first.len();
        self.check_level(level)?;
        let mut lookup = HashSet::with_capacity(family.len());
        for u in family {
            let u = checked_set(u, self.n, level)?;
            lookup.insert(u);
        }
        let mut out = BTreeSet::new();
        for e in &self.edges {
            for u in e.iter().copied().combinations(level) {
                if lookup.contains(&u) {
                    out.insert(difference(e, &u));
                }
            }
        }
        Ok(Hypergraph::from_edge_set(self.n, self.k - level, out))
    }

    /// Fiber over the singletons of a vertex set: the union of their links.
    pub fn fiber_of_vertices(&self, vertices: &[Vertex]) -> Result<Hypergraph> {
        if self.k < 2 {
            return Err(Error::LevelOutOfRange { level: 1, k: self.k });
        }
        let singletons: Vec<Edge> = vertices.iter().map(|&v| vec![v]).collect();
        if singletons.is_empty() {
            return Hypergraph::empty(self.n, self.k - 1);
        }
        self.fiber(&singletons)
    }

    pub fn link(&self, vertex: Vertex) -> Result<Hypergraph> {
        self.fiber_of_vertices(&[vertex])
    }

    /// Number of edges containing the `l`-set `u`.
    pub fn degree(&self, u: &[Vertex]) -> Result<usize> {
        self.check_level(u.len())?;
        let u = checked_set(u, self.n, u.len())?;
        Ok(self.edges.iter().filter(|e| is_subset(&u, e)).count())
    }

    /// Degrees of every `l`-set that lies in at least one edge.
    pub fn degree_profile(&self, level: usize) -> Result<HashMap<Edge, usize>> {
        self.check_level(level)?;
        let mut counts = HashMap::new();
        for e in &self.edges {
            for u in e.iter().copied().combinations(level) {
                *counts.entry(u).or_insert(0) += 1;
            }
        }
        Ok(counts)
    }

    pub fn max_degree(&self, level: usize) -> Result<usize> {
        self.check_level(level)?;
        if level == 1 {
            return Ok(self.vertex_degrees().into_iter().max().unwrap_or(0));
        }
        // pack each l-subset into one integer when n^l fits, then count runs
        let bits = usize::BITS - self.n.leading_zeros();
        if bits as usize * level > 64 {
            return Ok(self.degree_profile(level)?.into_values().max().unwrap_or(0));
        }
        let mut keys: Vec<u64> = Vec::with_capacity(self.edges.len() * binomial(self.k, level) as usize);
        for e in &self.edges {
            for u in e.iter().combinations(level) {
                keys.push(u.into_iter().fold(0u64, |acc, &v| acc << bits | v as u64));
            }
        }
        keys.sort_unstable();
        Ok(keys
            .chunk_by(|a, b| a == b)
            .map(|run| run.len())
            .max()
            .unwrap_or(0))
    }

    /// Maximum `l`-set degree for each `l` in `1..k`.
    pub fn max_degrees(&self) -> Vec<usize> {
        (1..self.k)
            .map(|level| self.max_degree(level).expect("level in range"))
            .collect()
    }

    /// Per-vertex degrees; valid for every `k >= 1`.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Section `[U, V]_H`: edges that split as `u | v` with `u` in `family_u`
    /// and `v` in `family_v`.
    pub fn section(&self, family_u: &[Edge], family_v: &[Edge]) -> Result<Vec<Edge>> {
        let (Some(u0), Some(v0)) = (family_u.first(), family_v.first()) else {
            return Ok(Vec::new());
        };
        let level = u0.len();
        self.check_level(level)?;
        if v0.len() != self.k - level {
            return Err(Error::WrongArity {
                edge: v0.clone(),
                expected: self.k - level,
                found: v0.len(),
            });
        }
        let lookup_u = checked_family(family_u, self.n, level)?;
        let lookup_v = checked_family(family_v, self.n, self.k - level)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| {
                e.iter()
                    .copied()
                    .combinations(level)
                    .any(|u| lookup_u.contains(&u) && lookup_v.contains(&difference(e, &u)))
            })
            .cloned()
            .collect())
    }

    /// Section `[U, [X]^{k-l}]_H`: edges containing some member of `family_u`.
    pub fn incident_section(&self, family_u: &[Edge]) -> Result<Vec<Edge>> {
        let Some(u0) = family_u.first() else {
            return Ok(Vec::new());
        };
        let level = u0.len();
        self.check_level(level)?;
        let lookup_u = checked_family(family_u, self.n, level)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| {
                e.iter()
                    .copied()
                    .combinations(level)
                    .any(|u| lookup_u.contains(&u))
            })
            .cloned()
            .collect())
    }

    /// Logarithmic degree, clamped to `[0, 1]`. Empty and 1-uniform
    /// hypergraphs have logarithmic degree 0.
    ///
    /// The value is the least double at which [`Hypergraph::is_bounded`]
    /// holds, so rounding in `log` and `powf` never leaves `H` unbounded at
    /// its own logarithmic degree.
    pub fn ldeg(&self) -> f64 {
        let degrees = self.max_degrees();
        let mut best = 0.0f64;
        for (level, &max) in (1..self.k).zip(&degrees) {
            let log = LogSize::of_count(max, self.n);
            if !log.is_neg_infinity() {
                best = best.max(log.value() / (self.k - level) as f64);
            }
        }
        best = best.clamp(0.0, 1.0);
        while best < 1.0 && !self.bounded_with(&degrees, best) {
            best = best.next_up();
        }
        best
    }

    fn bounded_with(&self, max_degrees: &[usize], delta: f64) -> bool {
        (1..self.k)
            .zip(max_degrees)
            .all(|(level, &max)| max as f64 <= power(self.n, (self.k - level) as f64 * delta))
    }

    /// Every `l`-set degree is at most `n^{(k-l) delta}`.
    pub fn is_bounded(&self, delta: f64) -> bool {
        self.bounded_with(&self.max_degrees(), delta)
    }

    /// `delta`-bounded with `log_n |H| >= 1 + (k-1) delta - eps`.
    pub fn is_homogeneous(&self, delta: f64, eps: f64) -> bool {
        self.is_bounded(delta)
            && count_at_least(
                self.len(),
                self.n,
                1.0 + (self.k - 1) as f64 * delta - eps,
            )
    }

    /// The `t`-sets whose degree reaches `n^{(k-t) delta}`.
    pub fn nabla(&self, t: usize, delta: f64) -> Result<Vec<Edge>> {
        let bound = power(self.n, (self.k - t.min(self.k)) as f64 * delta);
        let mut out: Vec<Edge> = self
            .degree_profile(t)?
            .into_iter()
            .filter(|&(_, d)| d as f64 >= bound)
            .map(|(u, _)| u)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Sub-hypergraph on the edges selected by index.
    pub(crate) fn select(&self, indices: impl IntoIterator<Item = usize>) -> Hypergraph {
        let mut edges: Vec<Edge> = indices.into_iter().map(|i| self.edges[i].clone()).collect();
        edges.sort_unstable();
        edges.dedup();
        Hypergraph::from_canonical(self.n, self.k, edges)
    }
}

/// Validates and canonicalizes one vertex set of the given arity.
pub(crate) fn checked_set(raw: &[Vertex], n: usize, arity: usize) -> Result<Edge> {
    let mut set = raw.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&v) = set.iter().find(|&&v| v as usize >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if set.len() != arity {
        return Err(Error::WrongArity {
            edge: raw.to_vec(),
            expected: arity,
            found: set.len(),
        });
    }
    Ok(set)
}

fn checked_family(family: &[Edge], n: usize, arity: usize) -> Result<HashSet<Edge>> {
    family.iter().map(|u| checked_set(u, n, arity)).collect()
}

/// `a` and `b` sorted ascending.
pub(crate) fn is_subset(a: &[Vertex], b: &[Vertex]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// `e \ u` for sorted `e`.
pub(crate) fn difference(e: &[Vertex], u: &[Vertex]) -> Edge {
    e.iter().copied().filter(|v| !u.contains(v)).collect()
}

/// Sorted, deduplicated, range-checked vertex set.
pub fn canonical_vertex_set(raw: &[Vertex], n: usize) -> Result<Vec<Vertex>> {
    let mut set = raw.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&v) = set.iter().find(|&&v| v as usize >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, k: usize, edges: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::new(n, k, edges.iter().copied()).unwrap()
    }

    #[test]
    fn canonicalizes_and_dedups() {
        let h = hg(4, 2, &[&[1, 0], &[0, 2]]);
        assert_eq!(h.edges(), &[vec![0, 1], vec![0, 2]]);
        let h = hg(4, 2, &[&[0, 1], &[1, 0]]);
        assert_eq!(h.edges(), &[vec![0, 1]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Hypergraph::new(4, 2, [[0u32, 5]]),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
        assert!(matches!(
            Hypergraph::new(4, 2, [[1u32, 1]]),
            Err(Error::WrongArity { .. })
        ));
        assert!(matches!(
            Hypergraph::new(4, 3, [[0u32, 1]]),
            Err(Error::WrongArity { .. })
        ));
        assert!(matches!(
            Hypergraph::empty(1, 2),
            Err(Error::TooFewVertices { n: 1 })
        ));
        assert!(matches!(Hypergraph::empty(3, 0), Err(Error::ZeroUniformity)));
    }

    #[test]
    fn fiber_examples() {
        let h = hg(4, 3, &[&[0, 1, 2], &[0, 1, 3], &[1, 2, 3]]);
        let f = h.fiber(&[vec![0]]).unwrap();
        assert_eq!(f.k(), 2);
        assert_eq!(f.edges(), &[vec![1, 2], vec![1, 3]]);
        // link(0) = {12, 13}, link(2) = {01, 13}
        let f = h.fiber(&[vec![0], vec![2]]).unwrap();
        assert_eq!(f.edges(), &[vec![0, 1], vec![1, 2], vec![1, 3]]);
        assert!(h.fiber(&[]).unwrap().is_empty());
        assert!(matches!(
            h.fiber(&[vec![0, 1, 2]]),
            Err(Error::LevelOutOfRange { level: 3, k: 3 })
        ));
    }

    #[test]
    fn degree_examples() {
        let star = hg(4, 2, &[&[0, 1], &[0, 2], &[0, 3]]);
        assert_eq!(star.degree(&[0]).unwrap(), 3);
        assert_eq!(star.degree(&[3]).unwrap(), 1);
        assert!(matches!(
            star.degree(&[9]),
            Err(Error::VertexOutOfRange { vertex: 9, .. })
        ));
        assert_eq!(star.max_degree(1).unwrap(), 3);
        assert_eq!(Hypergraph::empty(4, 2).unwrap().max_degree(1).unwrap(), 0);
        let h = hg(4, 3, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(h.max_degree(2).unwrap(), 2);
        assert!(h.max_degree(3).is_err());
    }

    #[test]
    fn section_examples() {
        let h = hg(4, 2, &[&[0, 1], &[2, 3]]);
        assert_eq!(h.section(&[vec![0]], &[vec![1]]).unwrap(), vec![vec![0, 1]]);
        let all: Vec<Edge> = (0..4).map(|v| vec![v]).collect();
        assert_eq!(
            h.section(&[vec![0], vec![2]], &all).unwrap(),
            vec![vec![0, 1], vec![2, 3]]
        );
        assert!(h.section(&[], &all).unwrap().is_empty());
        assert!(matches!(
            h.section(&[vec![0]], &[vec![1, 2]]),
            Err(Error::WrongArity { .. })
        ));
    }

    #[test]
    fn ldeg_and_boundedness() {
        let star = hg(4, 2, &[&[0, 1], &[0, 2], &[0, 3]]);
        assert!((star.ldeg() - 3f64.ln() / 4f64.ln()).abs() < 1e-12);
        assert!(!star.is_bounded(0.5));
        assert_eq!(hg(5, 3, &[&[0, 1, 2]]).ldeg(), 0.0);
        assert_eq!(Hypergraph::empty(4, 2).unwrap().ldeg(), 0.0);
        assert_eq!(hg(4, 1, &[&[0], &[1]]).ldeg(), 0.0);
        assert!(hg(4, 2, &[&[0, 1], &[2, 3]]).is_bounded(0.0));
        assert!(Hypergraph::empty(4, 3).unwrap().is_bounded(0.0));
    }

    #[test]
    fn homogeneity_examples() {
        let m = hg(4, 2, &[&[0, 1], &[2, 3]]);
        assert!(m.is_homogeneous(0.0, 0.5));
        assert!(!m.is_homogeneous(0.0, 0.4));
        assert!(!Hypergraph::empty(4, 2).unwrap().is_homogeneous(0.0, 0.5));
    }

    #[test]
    fn nabla_examples() {
        let h = hg(4, 2, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2]]);
        assert_eq!(
            h.nabla(1, 0.5).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(h.nabla(1, 0.0).unwrap().len(), 4);
        assert!(Hypergraph::empty(4, 2).unwrap().nabla(1, 0.5).unwrap().is_empty());
        assert!(h.nabla(2, 0.5).is_err());
    }

    #[test]
    fn log_size_convention() {
        assert!(LogSize::of_count(0, 4).is_neg_infinity());
        assert!(LogSize::NEG_INFINITY >= LogSize::NEG_INFINITY);
        assert_eq!(LogSize::of_count(16, 4).value(), 2.0);
        assert!(count_at_least(0, 4, f64::NEG_INFINITY));
    }
}
