use hypercontainers::instances::{gen_ap, gen_random, read_edge_list, read_edge_list_file, write_edge_list, write_edge_list_file};
use hypercontainers::{Hypergraph, Vertex};
use itertools::Itertools;
use proptest::prelude::*;

#[test]
fn ap_counts_match_triple_scan() {
    for n in 3..=200usize {
        let mut triples = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if b - a == c - b {
                        triples.push(vec![a as Vertex, b as Vertex, c as Vertex]);
                    }
                }
            }
        }
        let h = gen_ap(n, 3).unwrap();
        assert_eq!(h.len(), triples.len(), "n = {n}");
        if n <= 40 {
            assert_eq!(h.edges(), triples.as_slice());
        }
    }
}

#[test]
fn longer_progressions() {
    let h = gen_ap(20, 4).unwrap();
    for e in h.edges() {
        let d = e[1] - e[0];
        assert!(e.windows(2).all(|w| w[1] - w[0] == d));
    }
    let count = (0..20u32).combinations(4).filter(|e| e[1] - e[0] == e[2] - e[1] && e[2] - e[1] == e[3] - e[2]).count();
    assert_eq!(h.len(), count);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_instances_are_bounded(n in 6usize..=30, k in 2usize..=3, delta in 0.0f64..=0.6, eps in 0.0f64..=1.0, seed in any::<u64>()) {
        match gen_random(n, k, delta, eps, seed) {
            Ok(g) => {
                prop_assert!(g.hypergraph.is_bounded(delta));
                prop_assert_eq!(g.homogeneous, g.hypergraph.is_homogeneous(delta, eps));
                prop_assert_eq!(g.ldeg, g.hypergraph.ldeg());
                let again = gen_random(n, k, delta, eps, seed).unwrap();
                prop_assert_eq!(g.hypergraph, again.hypergraph);
            }
            Err(e) => prop_assert!(e.to_string().contains("exceeds"), "{}", e),
        }
    }

    #[test]
    fn edge_lists_round_trip(n in 2usize..=12, k in 1usize..=3, mask in any::<u64>()) {
        prop_assume!(k <= n);
        let edges: Vec<Vec<Vertex>> = (0..n as Vertex)
            .combinations(k)
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let h = Hypergraph::new(n, k, edges).unwrap();
        let mut bytes = Vec::new();
        write_edge_list(&h, &mut bytes).unwrap();
        let back = read_edge_list(bytes.as_slice()).unwrap();
        prop_assert_eq!(&back, &h);
        let mut again = Vec::new();
        write_edge_list(&back, &mut again).unwrap();
        prop_assert_eq!(again, bytes);
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.hg");
    let g = gen_random(20, 3, 0.4, 0.5, 3).unwrap().hypergraph;
    write_edge_list_file(&g, &path).unwrap();
    let first = std::fs::read(&path).unwrap();
    assert_eq!(read_edge_list_file(&path).unwrap(), g);
    write_edge_list_file(&g, &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
    assert!(first.ends_with(b"\n") && !first.contains(&b'\r'));
}
