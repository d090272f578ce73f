use hypercontainers::{greedy_bounded_sub, max_bounded_sub, BoundedOracle, GuardPolicy, Hypergraph, Vertex};
use itertools::Itertools;
use proptest::prelude::*;

fn hypergraph(max_n: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=3usize, 4..=max_n)
        .prop_flat_map(move |(k, n)| {
            let all: Vec<Vec<Vertex>> = (0..n as Vertex).combinations(k).collect();
            let m = all.len().min(max_edges);
            (Just((n, k)), proptest::sample::subsequence(all, 0..=m))
        })
        .prop_map(|((n, k), edges)| Hypergraph::new(n, k, edges).unwrap())
}

fn is_subhypergraph(small: &Hypergraph, big: &Hypergraph) -> bool {
    small.edges().iter().all(|e| big.contains(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn greedy_never_beats_exact(h in hypergraph(9, 20), delta in 0.0f64..=1.0) {
        let exact = max_bounded_sub(&h, delta, 64).unwrap();
        let greedy = greedy_bounded_sub(&h, delta);
        prop_assert!(exact.exact);
        prop_assert!(!greedy.exact || greedy.size() == exact.size());
        prop_assert!(greedy.size() <= exact.size());
        prop_assert!(exact.sub.is_bounded(delta) && greedy.sub.is_bounded(delta));
        prop_assert!(is_subhypergraph(&exact.sub, &h) && is_subhypergraph(&greedy.sub, &h));
    }

    #[test]
    fn fibers_grow_with_the_vertex_set(h in hypergraph(9, 24), small in any::<u16>(), extra in any::<u16>(), delta in 0.0f64..=1.0) {
        let pick = |mask: u16| -> Vec<Vertex> { (0..h.n() as Vertex).filter(|v| mask >> v & 1 == 1).collect() };
        let f = pick(small);
        let g = pick(small | extra);
        let hf = h.fiber_of_vertices(&f).unwrap();
        let hg = h.fiber_of_vertices(&g).unwrap();
        prop_assert!(is_subhypergraph(&hf, &hg));
        if hg.len() <= 20 {
            let a = max_bounded_sub(&hf, delta, 64).unwrap();
            let b = max_bounded_sub(&hg, delta, 64).unwrap();
            prop_assert!(a.size() <= b.size());
        }
    }

    #[test]
    fn shared_oracle_is_interleaving_independent(h in hypergraph(8, 16)) {
        let oracle = BoundedOracle::new(64, GuardPolicy::Refuse);
        let deltas = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        let expected: Vec<Vec<Vec<Vertex>>> = deltas
            .iter()
            .map(|&d| max_bounded_sub(&h, d, 64).unwrap().sub.edges().to_vec())
            .collect();
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|t| {
                    let (oracle, h) = (&oracle, &h);
                    s.spawn(move || {
                        // each thread walks the deltas in a different order
                        let mut out = vec![Vec::new(); deltas.len()];
                        for i in (0..deltas.len()).map(|i| (i + t) % deltas.len()) {
                            out[i] = oracle.max_bounded(h, deltas[i]).unwrap().sub.edges().to_vec();
                        }
                        out
                    })
                })
                .collect();
            for handle in handles {
                assert_eq!(handle.join().unwrap(), expected);
            }
        });
    }
}

#[test]
fn guard_refuses_or_falls_back() {
    // K_9 has 36 edges in one component and is not 0.3-bounded
    let k9 = Hypergraph::new(9, 2, (0..9 as Vertex).combinations(2)).unwrap();
    assert!(max_bounded_sub(&k9, 0.3, 24).is_err());
    let refuse = BoundedOracle::new(24, GuardPolicy::Refuse);
    assert!(refuse.max_bounded(&k9, 0.3).is_err());
    assert!(!refuse.heuristic_fired());
    let fallback = BoundedOracle::new(24, GuardPolicy::FallBackToGreedy);
    let w = fallback.max_bounded(&k9, 0.3).unwrap();
    assert!(!w.exact && w.sub.is_bounded(0.3));
    assert!(fallback.heuristic_fired());
    // already bounded inputs never need the search, whatever their size
    assert_eq!(max_bounded_sub(&k9, 1.0, 1).unwrap().size(), 36);
}
