//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here touches the library's peeling or co-occurrence code: pair
//! counts come straight from the edge lists and cores from a naive fixpoint.

#![allow(dead_code)]

use kgcore::{Hypergraph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOY: &str = "1 2 3\n1 2 3\n1 2 4\n3 4 5\n4 5 6\n4 5 6\n";

pub fn toy() -> Hypergraph {
    TOY.parse().unwrap()
}

/// Dense `n x n` pair-count matrix.
pub struct Pairs {
    n: usize,
    counts: Vec<u32>,
}

impl Pairs {
    pub fn of(graph: &Hypergraph) -> Self {
        let n = graph.node_count();
        let mut counts = vec![0; n * n];
        for e in graph.edges() {
            for &a in e.members() {
                for &b in e.members() {
                    if a != b {
                        counts[a.index() * n + b.index()] += 1;
                    }
                }
            }
        }
        Self { n, counts }
    }

    pub fn get(&self, a: NodeId, b: NodeId) -> u32 {
        self.counts[a.index() * self.n + b.index()]
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Sweeps every alive node and deletes violators until nothing changes.
    pub fn core(&self, k: u32, g: u32) -> Vec<NodeId> {
        let mut alive = vec![true; self.n];
        loop {
            let mut changed = false;
            for v in 0..self.n {
                if !alive[v] {
                    continue;
                }
                let support = (0..self.n)
                    .filter(|&w| alive[w] && self.counts[v * self.n + w] >= g)
                    .count();
                if (support as u32) < k {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.n)
            .filter(|&v| alive[v])
            .map(|v| NodeId(v as u32))
            .collect()
    }

    /// Largest `k` with a non-empty `(k, 1)`-core.
    pub fn k_star(&self) -> u32 {
        (1..).find(|&k| self.core(k, 1).is_empty()).unwrap() - 1
    }

    /// Largest `k` with `v` in the `(k, g)`-core, 0 if none.
    pub fn g_coreness(&self, v: NodeId, g: u32) -> u32 {
        let mut k = 0;
        while self.core(k + 1, g).contains(&v) {
            k += 1;
        }
        k
    }
}

pub fn oracle_core(graph: &Hypergraph, k: u32, g: u32) -> Vec<NodeId> {
    Pairs::of(graph).core(k, g)
}

/// Random graph text: up to `max_nodes` node labels, up to `max_edges`
/// edges, cardinalities in `cmin..=cmax`.
pub fn random_text(
    seed: u64,
    max_nodes: usize,
    max_edges: usize,
    cmin: usize,
    cmax: usize,
) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(cmax..=max_nodes);
    let m = rng.random_range(1..=max_edges);
    // A small hot set makes repeated pairs, and so deep cores, likely.
    let hot = rng.random_range(cmax..=n);
    let mut out = String::new();
    for _ in 0..m {
        let card = rng.random_range(cmin..=cmax);
        let pool = if rng.random_bool(0.6) { hot } else { n };
        let members = rand::seq::index::sample(&mut rng, pool, card);
        let line: Vec<String> = members.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn random_graph(seed: u64, max_nodes: usize, max_edges: usize) -> Hypergraph {
    random_text(seed, max_nodes, max_edges, 2, 5)
        .parse()
        .unwrap()
}

pub fn sorted(mut v: Vec<NodeId>) -> Vec<NodeId> {
    v.sort_unstable();
    v
}

pub fn is_subset(a: &[NodeId], b: &[NodeId]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

pub fn intersect(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_ok())
        .collect()
}
