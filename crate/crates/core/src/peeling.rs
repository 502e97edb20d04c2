//! Ground-truth `(k, g)`-core peeling and per-`g` shell enumeration.
//!
//! A node survives in the `(k, g)`-core when at least `k` surviving neighbours
//! share `g` or more edges with it. Pair counts never change as nodes are
//! deleted (the induced edge multiset keeps one trace per original edge), so
//! peeling only has to track how many qualified neighbours are still alive.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::hypergraph::{CooccurrenceIndex, Hypergraph, NodeId};

/// Members of one `(k, g)`-core, ascending by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreResult {
    pub k: u32,
    pub g: u32,
    pub members: Vec<NodeId>,
}

impl CoreResult {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Computes the `(k, g)`-core of `graph` from scratch.
pub fn kg_core(graph: &Hypergraph, k: u32, g: u32) -> CoreResult {
    let co = CooccurrenceIndex::build(graph);
    Peeler::new(&co).core(k, g)
}

/// Shell decomposition of `graph` for a fixed `g`.
pub fn enum_h(graph: &Hypergraph, g: u32) -> ShellDecomposition {
    let co = CooccurrenceIndex::build(graph);
    Peeler::new(&co).shells(g)
}

/// Peeling routines over a precomputed co-occurrence table.
#[derive(Clone, Copy)]
pub struct Peeler<'a> {
    co: &'a CooccurrenceIndex,
}

impl<'a> Peeler<'a> {
    pub fn new(co: &'a CooccurrenceIndex) -> Self {
        Self { co }
    }

    pub fn core(&self, k: u32, g: u32) -> CoreResult {
        let order: Vec<NodeId> = (0..self.co.node_count() as u32).map(NodeId).collect();
        self.core_in_order(k, g, &order)
    }

    /// Peels with deficient nodes discovered in `order`. The fixpoint is
    /// unique, so the result does not depend on the order.
    ///
    /// # Panics
    ///
    /// Panics if `k` or `g` is zero, or `order` is not a permutation of the
    /// node set.
    pub fn core_in_order(&self, k: u32, g: u32, order: &[NodeId]) -> CoreResult {
        assert!(k >= 1 && g >= 1, "k and g must be positive");
        assert_eq!(
            order.len(),
            self.co.node_count(),
            "order must list every node"
        );
        let mut state = PeelState::new(self.co, g);
        state.peel_to(k, order.iter().copied());
        CoreResult {
            k,
            g,
            members: state.survivors(),
        }
    }

    /// Enumerates the shells for fixed `g`: `shells[k - 1]` holds the nodes
    /// whose `g`-coreness is exactly `k`.
    ///
    /// The surviving set is carried from one `k` to the next, so the whole
    /// decomposition costs a single peeling pass.
    pub fn shells(&self, g: u32) -> ShellDecomposition {
        assert!(g >= 1, "g must be positive");
        let n = self.co.node_count() as u32;
        let mut state = PeelState::new(self.co, g);
        // Nodes without any qualified neighbour have coreness 0 and belong to
        // no shell.
        state.peel_to(1, (0..n).map(NodeId));
        let mut shells = Vec::new();
        let mut k = 1;
        while state.alive_count > 0 {
            k += 1;
            let mut shell = state.peel_to(k, (0..n).map(NodeId));
            shell.sort_unstable();
            shells.push(shell);
        }
        ShellDecomposition { g, shells }
    }

    /// Peels `k = 1, 2, ...` for fixed `g`, reporting each non-empty
    /// `(k, g)`-core size to `visit` until the core empties or `visit`
    /// returns `false`.
    pub fn for_each_core_size(&self, g: u32, mut visit: impl FnMut(u32, usize) -> bool) {
        assert!(g >= 1, "g must be positive");
        let n = self.co.node_count() as u32;
        let mut state = PeelState::new(self.co, g);
        let mut k = 1;
        loop {
            state.peel_to(k, (0..n).map(NodeId));
            if state.alive_count == 0 || !visit(k, state.alive_count) {
                return;
            }
            k += 1;
        }
    }
}

struct PeelState<'a> {
    co: &'a CooccurrenceIndex,
    g: u32,
    alive: Vec<bool>,
    support: Vec<u32>,
    alive_count: usize,
    queue: VecDeque<NodeId>,
}

impl<'a> PeelState<'a> {
    fn new(co: &'a CooccurrenceIndex, g: u32) -> Self {
        let n = co.node_count();
        let support = (0..n as u32)
            .map(|v| co.qualified(NodeId(v), g).len() as u32)
            .collect();
        Self {
            co,
            g,
            alive: vec![true; n],
            support,
            alive_count: n,
            queue: VecDeque::new(),
        }
    }

    /// Deletes nodes until every survivor has support `>= k`. Returns the
    /// deleted nodes in deletion order.
    fn peel_to(&mut self, k: u32, scan: impl Iterator<Item = NodeId>) -> Vec<NodeId> {
        let mut removed = Vec::new();
        for v in scan {
            if self.alive[v.index()] && self.support[v.index()] < k {
                self.kill(v);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            removed.push(v);
            for &w in self.co.qualified(v, self.g) {
                if !self.alive[w.index()] {
                    continue;
                }
                let s = &mut self.support[w.index()];
                *s -= 1;
                if *s < k {
                    self.kill(w);
                }
            }
        }
        removed
    }

    // A node leaves the alive set as soon as it is queued; its neighbours'
    // supports are decremented when it is popped.
    fn kill(&mut self, v: NodeId) {
        self.alive[v.index()] = false;
        self.alive_count -= 1;
        self.queue.push_back(v);
    }

    fn survivors(&self) -> Vec<NodeId> {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(v, _)| NodeId(v as u32))
            .collect()
    }
}

/// Shells for one `g`. `shells[k - 1]` is the set of nodes with `g`-coreness
/// exactly `k`; the last shell is non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellDecomposition {
    g: u32,
    shells: Vec<Vec<NodeId>>,
}

impl ShellDecomposition {
    pub fn g(&self) -> u32 {
        self.g
    }

    /// `k*_g`: the largest `k` with a non-empty `(k, g)`-core, or 0.
    pub fn k_max(&self) -> u32 {
        self.shells.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }

    /// Nodes with `g`-coreness exactly `k`; empty outside `1..=k_max`.
    pub fn shell(&self, k: u32) -> &[NodeId] {
        if k == 0 {
            return &[];
        }
        self.shells.get(k as usize - 1).map_or(&[], Vec::as_slice)
    }

    pub fn shells(&self) -> &[Vec<NodeId>] {
        &self.shells
    }

    /// The `(k, g)`-core as the union of shells `k..=k_max`.
    pub fn core(&self, k: u32) -> Vec<NodeId> {
        let start = k.max(1) as usize - 1;
        let mut out: Vec<NodeId> = self.shells.iter().skip(start).flatten().copied().collect();
        out.sort_unstable();
        out
    }

    /// `|(k, g)-core|` for `k = 1..=k_max`, a suffix sum of shell sizes.
    pub fn core_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![0u32; self.shells.len()];
        let mut acc = 0u32;
        for (i, shell) in self.shells.iter().enumerate().rev() {
            acc += shell.len() as u32;
            sizes[i] = acc;
        }
        sizes
    }
}

/// Shell decompositions for every `g` in `1..=g*` together with the derived
/// per-node coreness values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorenessTable {
    node_count: usize,
    decompositions: Vec<ShellDecomposition>,
    // g_coreness[g - 1][v]
    g_coreness: Vec<Vec<u32>>,
}

/// Runs shell enumeration for `g = 1, 2, ...` until the `(1, g)`-core is empty.
pub fn coreness_tables(graph: &Hypergraph) -> CorenessTable {
    coreness_tables_with(graph, 1)
}

/// Like [`coreness_tables`], spreading the per-`g` passes over `threads`
/// worker threads when `threads > 1`.
pub fn coreness_tables_with(graph: &Hypergraph, threads: usize) -> CorenessTable {
    if threads <= 1 {
        let co = CooccurrenceIndex::build(graph);
        return CorenessTable::from_cooccurrence(&co, false);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| {
            let co = CooccurrenceIndex::build_parallel(graph);
            CorenessTable::from_cooccurrence(&co, true)
        }),
        Err(err) => {
            log::warn!("could not start {threads} worker threads ({err}), building sequentially");
            let co = CooccurrenceIndex::build(graph);
            CorenessTable::from_cooccurrence(&co, false)
        }
    }
}

impl CorenessTable {
    /// The `(1, g)`-core is exactly the set of nodes with some pair count
    /// `>= g`, so `g*` is the largest pair count and every `g <= g*` yields a
    /// non-empty decomposition.
    pub fn from_cooccurrence(co: &CooccurrenceIndex, parallel: bool) -> Self {
        let g_star = co.max_count();
        let peeler = Peeler::new(co);
        let decompositions: Vec<ShellDecomposition> = if parallel {
            (1..=g_star)
                .into_par_iter()
                .map(|g| peeler.shells(g))
                .collect()
        } else {
            (1..=g_star).map(|g| peeler.shells(g)).collect()
        };
        debug_assert!(decompositions.iter().all(|d| !d.is_empty()));
        let n = co.node_count();
        let g_coreness = decompositions
            .iter()
            .map(|d| {
                let mut c = vec![0u32; n];
                for (i, shell) in d.shells.iter().enumerate() {
                    for v in shell {
                        c[v.index()] = i as u32 + 1;
                    }
                }
                c
            })
            .collect();
        Self {
            node_count: n,
            decompositions,
            g_coreness,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Largest `g` with a non-empty `(1, g)`-core.
    pub fn g_star(&self) -> u32 {
        self.decompositions.len() as u32
    }

    /// Largest `k` with a non-empty `(k, 1)`-core.
    pub fn k_star(&self) -> u32 {
        self.k_star_for(1)
    }

    pub fn k_star_for(&self, g: u32) -> u32 {
        self.shells(g).map_or(0, ShellDecomposition::k_max)
    }

    pub fn shells(&self, g: u32) -> Option<&ShellDecomposition> {
        if g == 0 {
            return None;
        }
        self.decompositions.get(g as usize - 1)
    }

    pub fn decompositions(&self) -> &[ShellDecomposition] {
        &self.decompositions
    }

    /// Largest `k` such that `v` is in the `(k, g)`-core (0 if none).
    pub fn g_coreness(&self, v: NodeId, g: u32) -> u32 {
        if g == 0 {
            return 0;
        }
        self.g_coreness
            .get(g as usize - 1)
            .map_or(0, |c| c[v.index()])
    }

    /// Largest `g` such that `v` is in the `(k, g)`-core (0 if none).
    pub fn k_coreness(&self, v: NodeId, k: u32) -> u32 {
        // g-coreness is non-increasing in g, so this is a prefix length.
        self.g_coreness
            .partition_point(|c| c[v.index()] >= k.max(1)) as u32
    }
}
