//! Independent checking of print/container pairs.
//!
//! Everything here is checked against the definitions only: a pair is any
//! [`PrintContainerPair`], and the verifier never looks inside the engine.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Engine, Mode, Print};
use crate::error::{Error, Result};
use crate::hypergraph::{canonical_vertex_set, power, Hypergraph, LogSize, Vertex};
use crate::par::{fold_indexed, map_range, Execution};
use crate::params::Params;
use crate::report::{Check, ContainerStats, Coverage, Diagnostic, InstanceSummary, VerificationReport};

pub const DEFAULT_ENUM_CAP: usize = 20;
pub const DEFAULT_SAMPLES: usize = 1000;

/// A print selector and a container selector for one hypergraph.
pub trait PrintContainerPair: Sync {
    fn hypergraph(&self) -> &Hypergraph;
    fn params(&self) -> &Params;
    fn print_of(&self, independent: &[Vertex]) -> Result<Print>;
    fn container_of(&self, print: &Print) -> Result<Vec<Vertex>>;

    /// Whether the head of `print` is expanding, when the pair knows.
    fn top_level_expanding(&self, _print: &Print) -> Result<Option<bool>> {
        Ok(None)
    }

    fn mode(&self) -> Mode {
        Mode::Permissive
    }

    /// Whether any answer so far relied on a heuristic.
    fn heuristic(&self) -> bool {
        false
    }
}

impl PrintContainerPair for Engine {
    fn hypergraph(&self) -> &Hypergraph {
        Engine::hypergraph(self)
    }

    fn params(&self) -> &Params {
        Engine::params(self)
    }

    fn print_of(&self, independent: &[Vertex]) -> Result<Print> {
        Engine::print_of(self, independent)
    }

    fn container_of(&self, print: &Print) -> Result<Vec<Vertex>> {
        Engine::container_of(self, print)
    }

    fn top_level_expanding(&self, print: &Print) -> Result<Option<bool>> {
        match print.fingerprints().first() {
            Some(head) if self.hypergraph().k() >= 2 => self.is_expanding(head).map(Some),
            _ => Ok(None),
        }
    }

    fn mode(&self) -> Mode {
        self.config().mode
    }

    fn heuristic(&self) -> bool {
        Engine::heuristic(self)
    }
}

/// All independent sets, as sorted vertex lists. Requires `n <= cap` and
/// `n <= 63`.
pub fn enumerate_independent_sets(h: &Hypergraph, cap: usize) -> Result<Vec<Vec<Vertex>>> {
    Ok(independent_masks(h, cap)?
        .into_iter()
        .map(|mask| mask_to_set(mask, h.n()))
        .collect())
}

/// `|I_X(H)|` without materializing the sets.
pub fn count_independent_sets(h: &Hypergraph, cap: usize) -> Result<u128> {
    Ok(independent_masks(h, cap)?.len() as u128)
}

fn independent_masks(h: &Hypergraph, cap: usize) -> Result<Vec<u64>> {
    let n = h.n();
    if n > cap.min(63) {
        return Err(Error::EnumerationCap { n, cap: cap.min(63) });
    }
    // edges bucketed by their largest vertex, as bitmasks
    let mut by_max = vec![Vec::new(); n];
    for e in h.edges() {
        let mask = e.iter().fold(0u64, |m, &v| m | (1 << v));
        by_max[*e.last().expect("nonempty edge") as usize].push(mask);
    }
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((v, mask)) = stack.pop() {
        if v == n {
            out.push(mask);
            continue;
        }
        let with = mask | (1 << v);
        if by_max[v].iter().all(|&em| em & with != em) {
            stack.push((v + 1, with));
        }
        stack.push((v + 1, mask));
    }
    Ok(out)
}

fn mask_to_set(mask: u64, n: usize) -> Vec<Vertex> {
    (0..n as Vertex).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Greedy independent-set sampler over seed-determined vertex orders.
pub struct IndependentSetSampler<'a> {
    h: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
}

impl<'a> IndependentSetSampler<'a> {
    pub fn new(h: &'a Hypergraph) -> Self {
        IndependentSetSampler {
            h,
            incidence: h.incidence(),
        }
    }

    fn maximal_with(&self, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
        let n = self.h.n();
        let mut order: Vec<Vertex> = (0..n as Vertex).collect();
        order.shuffle(rng);
        let k = self.h.k();
        let mut member = vec![false; n];
        // a vertex is blocked once some edge holds it and k-1 members
        let mut blocked = vec![false; n];
        if k == 1 {
            for e in self.h.edges() {
                blocked[e[0] as usize] = true;
            }
        }
        let mut inside = vec![0u32; self.h.len()];
        for x in order {
            if blocked[x as usize] {
                continue;
            }
            member[x as usize] = true;
            for &i in &self.incidence[x as usize] {
                inside[i] += 1;
                if inside[i] as usize == k - 1 {
                    let edge = &self.h.edges()[i];
                    if let Some(&last) = edge.iter().find(|&&v| !member[v as usize]) {
                        blocked[last as usize] = true;
                    }
                }
            }
        }
        (0..n as Vertex).filter(|&v| member[v as usize]).collect()
    }

    /// A maximal independent set along the permutation drawn from `seed`.
    pub fn maximal(&self, seed: u64) -> Vec<Vertex> {
        self.maximal_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Sample number `index` of the stream for `seed`: even indices are
    /// maximal sets, odd ones random subsets of a maximal set.
    pub fn sample(&self, seed: u64, index: usize) -> Vec<Vertex> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let maximal = self.maximal_with(&mut rng);
        if index.is_multiple_of(2) {
            return maximal;
        }
        let keep: f64 = rng.gen();
        maximal.into_iter().filter(|_| rng.gen::<f64>() < keep).collect()
    }
}

/// Greedy maximal independent set along a seed-determined permutation.
pub fn sample_independent_set(h: &Hypergraph, seed: u64) -> Vec<Vertex> {
    IndependentSetSampler::new(h).maximal(seed)
}

/// `count` samples, identical for every execution strategy.
pub fn sample_independent_sets(
    h: &Hypergraph,
    count: usize,
    seed: u64,
    exec: Execution,
) -> Vec<Vec<Vertex>> {
    let sampler = IndependentSetSampler::new(h);
    map_range(exec, count, |i| sampler.sample(seed, i))
}

#[derive(Default)]
struct Tally {
    cond_i: Option<(usize, String)>,
    cond_ii: Option<(usize, String)>,
    cond_iii: Option<(usize, String)>,
    containers: BTreeMap<Print, Vec<Vertex>>,
    error: Option<(usize, Error)>,
}

fn earliest<T>(a: Option<(usize, T)>, b: Option<(usize, T)>) -> Option<(usize, T)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 < x.0 { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.cond_i = earliest(self.cond_i, other.cond_i);
        self.cond_ii = earliest(self.cond_ii, other.cond_ii);
        self.cond_iii = earliest(self.cond_iii, other.cond_iii);
        self.error = earliest(self.error, other.error);
        let mut other_containers = other.containers;
        self.containers.append(&mut other_containers);
        self
    }

    fn record(mut self, index: usize, set: &[Vertex], pair: &dyn PrintContainerPair) -> Tally {
        if let Err(e) = self.check_one(index, set, pair) {
            self.error = earliest(
                self.error,
                Some((
                    index,
                    Error::AtSet {
                        index,
                        source: Box::new(e),
                    },
                )),
            );
        }
        self
    }

    fn check_one(&mut self, index: usize, raw: &[Vertex], pair: &dyn PrintContainerPair) -> Result<()> {
        let h = pair.hypergraph();
        let set = canonical_vertex_set(raw, h.n())?;
        if let Some(edge) = h.violated_edge(&set) {
            return Err(Error::NotIndependent { edge: edge.clone() });
        }
        let print = pair.print_of(&set)?;
        let params = pair.params();
        let shape_ok = print.len() < h.k().max(1)
            && print
                .fingerprints()
                .iter()
                .all(|f| params.is_fingerprint(f.len()));
        if !shape_ok {
            self.note_i(index, format!("I={} P={print}", fmt_set(&set)));
        }
        if let Some(container) = self.containers.get(&print) {
            let container = container.clone();
            self.check_iii(index, &set, &print, &container);
            return Ok(());
        }
        match pair.container_of(&print) {
            Ok(container) => {
                self.check_iii(index, &set, &print, &container);
                self.containers.insert(print, container);
            }
            Err(e) => {
                let msg = format!("P={print}: {e}");
                self.cond_ii = earliest(self.cond_ii.take(), Some((index, msg)));
            }
        }
        Ok(())
    }

    fn note_i(&mut self, index: usize, msg: String) {
        self.cond_i = earliest(self.cond_i.take(), Some((index, msg)));
    }

    fn check_iii(&mut self, index: usize, set: &[Vertex], print: &Print, container: &[Vertex]) {
        let union = print.union();
        let covered = union.iter().all(|v| set.binary_search(v).is_ok());
        let contained = set
            .iter()
            .all(|v| union.binary_search(v).is_ok() || container.binary_search(v).is_ok());
        if !(covered && contained) {
            let msg = format!("I={} P={print} C={}", fmt_set(set), fmt_set(container));
            self.cond_iii = earliest(self.cond_iii.take(), Some((index, msg)));
        }
    }
}

fn fmt_set(set: &[Vertex]) -> String {
    let body: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", body.join(" "))
}

fn check_from(found: Option<(usize, String)>) -> Check {
    Check {
        counterexample: found.map(|(i, msg)| format!("set #{i}: {msg}")),
    }
}

/// Runs the pair on every supplied set and checks the four print/container
/// conditions, container sizes and (for enumerations) the counting bound.
///
/// With [`Coverage::Enumeration`] the caller asserts that `sets` is exactly
/// the family of independent sets.
pub fn verify(
    pair: &dyn PrintContainerPair,
    sets: &[Vec<Vertex>],
    coverage: Coverage,
    exec: Execution,
) -> Result<VerificationReport> {
    let tally = fold_indexed(
        exec,
        sets,
        Tally::default,
        |acc, i, set| acc.record(i, set, pair),
        Tally::merge,
    );
    if let Some((_, e)) = tally.error {
        return Err(e);
    }
    let h = pair.hypergraph();
    let params = *pair.params();
    let n = h.n();
    let instance = InstanceSummary::new(h, &params);
    // the base case needs only homogeneity: |X \ C| = |U H| = |H|
    let hypotheses = instance.homogeneous && (params.k == 1 || params.hypotheses_hold());

    // condition (iv) and container statistics over distinct containers
    let co_bar = power(n, 1.0 - params.sigma);
    let mut cond_iv = None;
    let mut distinct: BTreeMap<&[Vertex], usize> = BTreeMap::new();
    for (print, container) in &tally.containers {
        let co = n - container.len();
        if (co as f64) < co_bar && cond_iv.is_none() {
            cond_iv = Some(format!(
                "P={print} C={} |X\\C|={co} < n^(1-sigma)={}",
                fmt_set(container),
                crate::report::fmt_real(co_bar)
            ));
        }
        distinct.insert(container, co);
    }
    let logs: Vec<LogSize> = distinct.values().map(|&co| LogSize::of_count(co, n)).collect();
    let stats = ContainerStats {
        distinct_prints: tally.containers.len(),
        distinct_containers: distinct.len(),
        cocontainer_log_min: logs
            .iter()
            .copied()
            .reduce(|a, b| if b < a { b } else { a })
            .unwrap_or(LogSize::NEG_INFINITY),
        cocontainer_log_max: logs
            .iter()
            .copied()
            .reduce(|a, b| if b > a { b } else { a })
            .unwrap_or(LogSize::NEG_INFINITY),
        cocontainer_log_mean: if logs.is_empty() {
            f64::NAN
        } else {
            logs.iter().map(|l| l.value()).sum::<f64>() / logs.len() as f64
        },
    };

    // size diagnostic for non-expanding top-level prints
    let quarter_bar = power(n, 1.0 - params.eps);
    let mut nonexpanding = 0;
    let mut min_co: Option<usize> = None;
    for (print, container) in &tally.containers {
        if pair.top_level_expanding(print)? == Some(false) {
            nonexpanding += 1;
            let co = n - container.len();
            min_co = Some(min_co.map_or(co, |m| m.min(co)));
        }
    }
    let quarter_bound = match min_co {
        None => Diagnostic::NotApplicable,
        Some(_) if !hypotheses => Diagnostic::NotAsserted,
        Some(co) if 4.0 * co as f64 >= quarter_bar => Diagnostic::Pass,
        Some(_) => Diagnostic::Fail,
    };

    let cond_iii = check_from(tally.cond_iii);
    let counting_bound = (coverage == Coverage::Enumeration && cond_iii.passed()).then(|| {
        let rhs = tally
            .containers
            .iter()
            .map(|(print, container)| {
                let mut span = print.union();
                span.extend_from_slice(container);
                span.sort_unstable();
                span.dedup();
                1u128.checked_shl(span.len() as u32).unwrap_or(u128::MAX)
            })
            .fold(0u128, u128::saturating_add);
        (sets.len() as u128, rhs)
    });

    Ok(VerificationReport {
        instance,
        params,
        mode: pair.mode(),
        coverage,
        samples: sets.len(),
        cond_i: check_from(tally.cond_i),
        cond_ii: check_from(tally.cond_ii),
        cond_iii,
        cond_iv: Check {
            counterexample: cond_iv,
        },
        cond_iv_asserted: hypotheses,
        stats,
        nonexpanding_prints: nonexpanding,
        quarter_bound,
        quarter_bound_min_log: min_co.map(|co| LogSize::of_count(co, n)),
        counting_bound,
        heuristic: pair.heuristic(),
    })
}

/// `(|I_X(H)|, sum over distinct prints P of 2^{|U P + C_P|})` from a report
/// built on a full enumeration with condition (iii) passing.
pub fn counting_bound(report: &VerificationReport) -> Result<(u128, u128)> {
    report.counting_bound.ok_or(Error::CountingBoundUnavailable)
}
