//! Instance generators and the plain-text edge-list format.
//!
//! Edge-list files are UTF-8 with LF line endings: optional `#` comment lines,
//! a header `k n m`, then exactly `m` lines of `k` strictly ascending vertex
//! indices separated by single spaces.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use itertools::Itertools;
use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{binomial, power, Edge, Hypergraph, Vertex};
use crate::oracle::greedy_bounded_in_order;

/// A generated hypergraph with the measurements taken on it.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub hypergraph: Hypergraph,
    pub ldeg: f64,
    /// `(delta_target, eps_target)`-homogeneous.
    pub homogeneous: bool,
}

/// Samples `ceil(n^{1 + (k-1) delta})` distinct `k`-sets uniformly, then trims
/// them to a `delta`-bounded hypergraph by a greedy scan in sampling order.
pub fn gen_random(
    n: usize,
    k: usize,
    delta: f64,
    eps: f64,
    seed: u64,
) -> Result<GeneratedInstance> {
    if n < 2 {
        return Err(Error::TooFewVertices { n });
    }
    if k == 0 {
        return Err(Error::ZeroUniformity);
    }
    for (name, value) in [("delta", delta), ("eps", eps)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ParamOutOfRange { name, value });
        }
    }
    let available = binomial(n, k);
    let target = power(n, 1.0 + (k - 1) as f64 * delta).ceil() as u128;
    if target > available {
        return Err(Error::TooManyEdges {
            target,
            available,
            k,
        });
    }
    let target = target as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled: Vec<Edge> = if 2 * target as u128 > available {
        let mut all: Vec<Edge> = (0..n as Vertex).combinations(k).collect();
        all.shuffle(&mut rng);
        all.truncate(target);
        all
    } else {
        let mut seen = HashSet::with_capacity(target);
        let mut order = Vec::with_capacity(target);
        while order.len() < target {
            let mut e: Edge = index::sample(&mut rng, n, k)
                .into_iter()
                .map(|v| v as Vertex)
                .collect();
            e.sort_unstable();
            if seen.insert(e.clone()) {
                order.push(e);
            }
        }
        order
    };
    let candidates = Hypergraph::new(n, k, &sampled)?;
    let scan = sampled.iter().map(|e| {
        candidates
            .edges()
            .binary_search(e)
            .expect("sampled edge is present")
    });
    let hypergraph = greedy_bounded_in_order(&candidates, delta, scan).sub;
    Ok(GeneratedInstance {
        ldeg: hypergraph.ldeg(),
        homogeneous: hypergraph.is_homogeneous(delta, eps),
        hypergraph,
    })
}

/// The `k`-term arithmetic progressions in `{0, .., n-1}` (the shift of
/// `{1, .., n}` by one).
pub fn gen_ap(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 3 {
        return Err(Error::ApUniformity { k });
    }
    if n < k {
        return Err(Error::ApTooShort { n, k });
    }
    let mut edges = Vec::new();
    for step in 1..=(n - 1) / (k - 1) {
        for start in 0..n - (k - 1) * step {
            edges.push(
                (0..k)
                    .map(|j| (start + j * step) as Vertex)
                    .collect::<Edge>(),
            );
        }
    }
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(n, k, edges))
}

pub fn write_edge_list<W: Write>(h: &Hypergraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {}", h.k(), h.n(), h.len())?;
    for e in h.edges() {
        writeln!(out, "{}", e.iter().join(" "))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_edge_list_file(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list(h, BufWriter::new(File::create(path)?))
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Hypergraph> {
    read_edge_list(BufReader::new(File::open(path)?))
}

fn parse_fields(line: &str, lineno: usize, expect: usize, what: &str) -> Result<Vec<usize>> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != expect {
        return Err(Error::parse(
            lineno,
            format!("{what}: expected {expect} space-separated fields, found {}", fields.len()),
        ));
    }
    fields
        .into_iter()
        .map(|f| {
            if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(lineno, format!("{what}: `{f}` is not a base-10 integer")));
            }
            f.parse()
                .map_err(|_| Error::parse(lineno, format!("{what}: `{f}` overflows")))
        })
        .collect()
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Hypergraph> {
    let mut lines = input.lines().enumerate();
    let (k, n, m) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::parse(0, "missing header"));
        };
        let line = line?;
        if line.starts_with('#') {
            continue;
        }
        let h = parse_fields(&line, i + 1, 3, "header")?;
        break (h[0], h[1], h[2]);
    };
    if n < 2 {
        return Err(Error::TooFewVertices { n });
    }
    if k == 0 {
        return Err(Error::ZeroUniformity);
    }
    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line?;
        if edges.len() == m {
            return Err(Error::parse(
                lineno,
                format!("edge count mismatch: header declares {m} edges, found more"),
            ));
        }
        if line.starts_with('#') {
            return Err(Error::parse(lineno, "comments are only allowed before the header"));
        }
        let fields = parse_fields(&line, lineno, k, "edge")?;
        if fields.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(lineno, "unsorted edge line: vertices must be strictly ascending"));
        }
        if let Some(&v) = fields.iter().find(|&&v| v >= n) {
            return Err(Error::parse(lineno, format!("vertex {v} out of range for n = {n}")));
        }
        edges.push(fields.into_iter().map(|v| v as Vertex).collect());
    }
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("edge count mismatch: header declares {m} edges, found {}", edges.len()),
        ));
    }
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::parse(0, format!("duplicate edge {:?}", w[0])));
    }
    Ok(Hypergraph::from_canonical(n, k, edges))
}
