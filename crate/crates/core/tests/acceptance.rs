//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that every criterion is
//! executed and reported even when an earlier one fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypercontainers::instances::{gen_ap, gen_random};
use hypercontainers::oracle::{greedy_bounded_sub, max_bounded_sub};
use hypercontainers::report::Diagnostic;
use hypercontainers::verifier::{enumerate_independent_sets, sample_independent_sets};
use hypercontainers::{
    counting_bound, verify, Coverage, Engine, EngineConfig, Execution, Hypergraph, Mode, Params,
    Print, VerificationReport, Vertex,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn permissive(exact_cap: usize) -> EngineConfig {
    EngineConfig {
        mode: Mode::Permissive,
        exact_cap,
        check_independence: true,
    }
}

// ---------------------------------------------------------------------------
// 1. base case

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut failures = Vec::new();
    for trial in 0..50 {
        let n = rng.gen_range(2..=20usize);
        let m = rng.gen_range(1..=n);
        let mut vertices: Vec<Vertex> = (0..n as Vertex).collect();
        vertices.shuffle(&mut rng);
        let covered: Vec<Vertex> = vertices[..m].to_vec();
        let h = Hypergraph::new(n, 1, covered.iter().map(|&v| [v])).unwrap();
        // smallest eps making H homogeneous, nudged off the tie
        let log_m = (m as f64).ln() / (n as f64).ln();
        let eps = (1.0 - log_m + 0.01).clamp(0.0, 1.0);
        let pi = rng.gen_range(0.0..=1.0);
        let params = Params::derive(1, pi, eps, n).unwrap();
        let engine = Engine::new(h.clone(), params, permissive(24)).unwrap();
        let sets = enumerate_independent_sets(&h, 20).unwrap();
        let report = verify(&engine, &sets, Coverage::Enumeration, Execution::Parallel).unwrap();
        let mut expected: Vec<Vertex> = (0..n as Vertex).filter(|v| !covered.contains(v)).collect();
        expected.sort_unstable();
        let container = engine.container_of(&Print::empty()).unwrap();
        let ok = params.sigma == params.eps
            && report.cond_iv_asserted
            && report.all_asserted_pass()
            && report.cond_iv.passed()
            && report.stats.distinct_containers == 1
            && container == expected
            && report.counting_bound == Some((1 << (n - m), 1 << (n - m)));
        if !ok {
            failures.push(format!("trial {trial} (n={n}, m={m})"));
        }
    }
    let elapsed = start.elapsed();
    let timely = elapsed < Duration::from_secs(1);
    outcome(
        failures.is_empty() && timely,
        format!(
            "50 instances, {} failures {:?}, {:.3}s (limit 1s)",
            failures.len(),
            failures,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------------
// 2, 3, 5. exhaustive condition suite on generated instances

struct SuiteRun {
    label: String,
    report: VerificationReport,
}

fn exhaustive_suite() -> (Vec<SuiteRun>, Duration, Vec<String>) {
    let start = Instant::now();
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for k in [2usize, 3] {
        for n in 8..=16usize {
            for pi in [0.6, 0.7] {
                for (seed, eps) in [(1u64, 0.3), (2, 0.5), (3, 1.0)] {
                    let label = format!("k={k} n={n} pi={pi} eps={eps} seed={seed}");
                    let params = Params::derive(k, pi, eps, n).unwrap();
                    assert!(params.fingerprint_bound() >= 2.0, "{label}: n^pi < 2");
                    let generated = match gen_random(n, k, params.delta, eps, seed) {
                        Ok(g) => g,
                        Err(e) => {
                            skipped.push(format!("{label}: {e}"));
                            continue;
                        }
                    };
                    let h = generated.hypergraph;
                    let engine = Engine::new(h.clone(), params, permissive(24)).unwrap();
                    let sets = enumerate_independent_sets(&h, 20).unwrap();
                    let report =
                        verify(&engine, &sets, Coverage::Enumeration, Execution::Parallel)
                            .unwrap_or_else(|e| panic!("{label}: {e}"));
                    runs.push(SuiteRun { label, report });
                }
            }
        }
    }
    (runs, start.elapsed(), skipped)
}

fn criterion_2(runs: &[SuiteRun], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    let mut total_sets = 0;
    for run in runs {
        let r = &run.report;
        total_sets += r.samples;
        if r.heuristic {
            bad.push(format!("{}: oracle fell back to greedy", run.label));
        }
        for (name, check) in [("i", &r.cond_i), ("ii", &r.cond_ii), ("iii", &r.cond_iii)] {
            if let Some(cx) = &check.counterexample {
                bad.push(format!("{}: cond {name}: {cx}", run.label));
            }
        }
    }
    let by_k: BTreeMap<usize, usize> = runs.iter().fold(BTreeMap::new(), |mut m, r| {
        *m.entry(r.report.instance.k).or_default() += 1;
        m
    });
    let enough = runs.len() >= 50;
    let timely = elapsed < Duration::from_secs(300);
    outcome(
        bad.is_empty() && enough && timely,
        format!(
            "{} instances {:?}, {} independent sets, {} violations, {:.1}s (limit 300s){}",
            runs.len(),
            by_k,
            total_sets,
            bad.len(),
            elapsed.as_secs_f64(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

fn criterion_3(runs: &[SuiteRun]) -> Outcome {
    let mut asserted = 0;
    let mut measured = Vec::new();
    let mut failed = Vec::new();
    for run in runs {
        let r = &run.report;
        match r.quarter_bound {
            Diagnostic::Pass => asserted += 1,
            Diagnostic::Fail => failed.push(run.label.clone()),
            Diagnostic::NotAsserted => {
                measured.push(r.quarter_bound_min_log.expect("measured when recorded"))
            }
            Diagnostic::NotApplicable => {}
        }
    }
    let lo = measured
        .iter()
        .map(|l| l.value())
        .fold(f64::INFINITY, f64::min);
    outcome(
        failed.is_empty(),
        format!(
            "asserted on {asserted} instances, {} failures; recorded without asserting on {} \
             instances (min log_n|X\\C| = {lo:.4})",
            failed.len(),
            measured.len()
        ),
    )
}

fn criterion_5(runs: &[SuiteRun]) -> Outcome {
    let mut bad = Vec::new();
    let mut tightest = f64::INFINITY;
    for run in runs {
        match counting_bound(&run.report) {
            Ok((lhs, rhs)) => {
                tightest = tightest.min(rhs as f64 / lhs as f64);
                if lhs > rhs {
                    bad.push(format!("{}: {lhs} > {rhs}", run.label));
                }
            }
            Err(e) => bad.push(format!("{}: {e}", run.label)),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} instances, {} violations, smallest rhs/lhs = {tightest:.3}",
            runs.len(),
            bad.len()
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. oracle equivalence

/// Exhaustive maximum over all edge subsets, lexicographically least among
/// maxima. Independent of the solver: degrees are recounted per subset.
fn brute_force_max(h: &Hypergraph, delta: f64) -> Vec<Vec<Vertex>> {
    let edges = h.edges();
    let m = edges.len();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let sub = Hypergraph::new(h.n(), h.k(), chosen.iter().map(|&i| &edges[i])).unwrap();
        let bounded = (1..h.k()).all(|level| {
            let mut counts: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
            for e in sub.edges() {
                for_each_subset(e, level, &mut |u| *counts.entry(u).or_default() += 1);
            }
            let cap = (h.n() as f64).powf((h.k() - level) as f64 * delta);
            counts.values().all(|&c| c as f64 <= cap)
        });
        if !bounded {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => chosen.len() > b.len() || (chosen.len() == b.len() && chosen < *b),
        };
        if better {
            best = Some(chosen);
        }
    }
    best.unwrap_or_default()
        .into_iter()
        .map(|i| edges[i].clone())
        .collect()
}

fn for_each_subset(e: &[Vertex], size: usize, f: &mut dyn FnMut(Vec<Vertex>)) {
    fn go(e: &[Vertex], size: usize, start: usize, acc: &mut Vec<Vertex>, f: &mut dyn FnMut(Vec<Vertex>)) {
        if acc.len() == size {
            f(acc.clone());
            return;
        }
        for i in start..e.len() {
            acc.push(e[i]);
            go(e, size, i + 1, acc, f);
            acc.pop();
        }
    }
    go(e, size, 0, &mut Vec::new(), f);
}

fn random_small_hypergraph(rng: &mut ChaCha8Rng, k: usize) -> Hypergraph {
    let n = rng.gen_range(k.max(2) + 1..=7);
    let mut all = Vec::new();
    for_each_subset(&(0..n as Vertex).collect::<Vec<_>>(), k, &mut |e| all.push(e));
    all.shuffle(rng);
    let m = rng.gen_range(0..=all.len().min(14));
    Hypergraph::new(n, k, &all[..m]).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut bad = Vec::new();
    let mut searched = 0;
    for trial in 0..100 {
        let k = [1, 2, 3][trial % 3];
        let h = random_small_hypergraph(&mut rng, k);
        for delta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let exact = max_bounded_sub(&h, delta, 64).unwrap();
            let greedy = greedy_bounded_sub(&h, delta);
            let brute = brute_force_max(&h, delta);
            if !h.is_bounded(delta) {
                searched += 1;
            }
            let ok = exact.exact
                && exact.size() == brute.len()
                && exact.sub.edges() == brute.as_slice()
                && exact.sub.is_bounded(delta)
                && greedy.sub.is_bounded(delta)
                && greedy.size() <= exact.size()
                && exact.sub.edges().iter().all(|e| h.contains(e));
            if !ok {
                bad.push(format!("trial {trial} k'={k} delta={delta}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "100 hypergraphs x 5 deltas ({searched} needed a search), {} mismatches {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------------------
// 6. constants identity

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let mut worst = 0.0f64;
    let mut sigma_bad = 0;
    let mut hyp_cases = 0;
    for _ in 0..100 {
        let k = rng.gen_range(1..=6usize);
        let n = rng.gen_range(2..=1usize << 40);
        let p = Params::derive(k, rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0), n).unwrap();
        let kf = k as f64;
        let lhs = p.pi_tilde + (kf - 1.0) * p.delta_p - p.eps_tilde;
        let rhs = 1.0 + (kf - 2.0) * p.delta_p - p.eps_p;
        worst = worst.max((lhs - rhs).abs());
        if p.eps >= 2.0 * kf * p.log2 && k >= 2 {
            hyp_cases += 1;
            if p.sigma_p > p.sigma {
                sigma_bad += 1;
            }
        }
    }
    outcome(
        worst <= 1e-12 && sigma_bad == 0,
        format!(
            "max identity error {worst:.2e} (tol 1e-12); sigma' <= sigma on {hyp_cases} \
             tuples meeting eps >= 2k log_n 2, {sigma_bad} violations"
        ),
    )
}

// ---------------------------------------------------------------------------
// 7. arithmetic progressions

fn brute_force_ap_count(n: usize, k: usize) -> usize {
    (0u32..1 << n)
        .filter(|&mask| {
            let has = |x: usize| mask >> x & 1 == 1;
            !(0..n).any(|a| {
                has(a)
                    && (1..n).any(|d| {
                        a + (k - 1) * d < n && (1..k).all(|j| has(a + j * d))
                    })
            })
        })
        .count()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let ap101 = gen_ap(101, 3).unwrap();
    let mut triples = 0;
    for a in 0..101 {
        for b in a + 1..101 {
            for c in b + 1..101 {
                if b - a == c - b {
                    triples += 1;
                }
            }
        }
    }
    let h = gen_ap(14, 3).unwrap();
    // pi chosen so that H is (1 - pi)-bounded and n^pi >= 2
    let params = Params::derive(3, 0.4, 0.3, 14).unwrap();
    let engine = Engine::new(h.clone(), params, permissive(24)).unwrap();
    let sets = enumerate_independent_sets(&h, 20).unwrap();
    let brute = brute_force_ap_count(14, 3);
    let report = verify(&engine, &sets, Coverage::Enumeration, Execution::Parallel).unwrap();
    let bound = counting_bound(&report);
    let elapsed = start.elapsed();
    let ok = ap101.len() == 2500
        && triples == 2500
        && sets.len() == brute
        && report.cond_iii.passed()
        && matches!(bound, Ok((l, r)) if l <= r)
        && elapsed < Duration::from_secs(60);
    outcome(
        ok,
        format!(
            "|AP(101,3)| = {} (brute {triples}); 3-AP-free subsets of [14]: {} (brute {brute}); \
             bound {:?}; bounded at delta: {}; {:.2}s (limit 60s)",
            ap101.len(),
            sets.len(),
            bound.ok(),
            report.instance.bounded,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------------
// 8. scale smoke test

fn scale_run() -> (String, VerificationReport) {
    let (n, k, pi, eps) = (4096usize, 2usize, 0.7, 0.2);
    let params = Params::derive(k, pi, eps, n).unwrap();
    let h = gen_random(n, k, params.delta, eps, 8).unwrap().hypergraph;
    let engine = Engine::new(h.clone(), params, permissive(24)).unwrap();
    let sets = sample_independent_sets(&h, 1000, 8, Execution::Parallel);
    let report = verify(&engine, &sets, Coverage::Sample, Execution::Parallel).unwrap();
    (report.to_kv_string(), report)
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let (first, report) = scale_run();
    let (second, _) = scale_run();
    let elapsed = start.elapsed();
    let ok = report.cond_iii.passed()
        && report.samples == 1000
        && first == second
        && elapsed < Duration::from_secs(300);
    outcome(
        ok,
        format!(
            "{} edges, {} samples, cond_iii {}, {} distinct containers, reports identical: {}, \
             {:.1}s for two runs (limit 300s)",
            report.instance.edges,
            report.samples,
            if report.cond_iii.passed() { "pass" } else { "FAIL" },
            report.stats.distinct_containers,
            first == second,
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test -- --list` and friends pass libtest flags; nothing to list here
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("C1 base-case exactness", criterion_1()));
    let (runs, elapsed, skipped) = exhaustive_suite();
    for s in &skipped {
        println!("  note: skipped generator settings {s}");
    }
    results.push(("C2 condition suite, exhaustive", criterion_2(&runs, elapsed)));
    results.push(("C3 container-size diagnostic", criterion_3(&runs)));
    results.push(("C4 oracle equivalence", criterion_4()));
    results.push(("C5 counting bound", criterion_5(&runs)));
    results.push(("C6 constants identity", criterion_6()));
    results.push(("C7 AP demo", criterion_7()));
    results.push(("C8 scale smoke test", criterion_8()));
    let mut all = true;
    for (name, o) in &results {
        all &= o.passed;
        println!(
            "[{}] {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
