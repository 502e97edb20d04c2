//! Online `(k, g)`-core retrieval and size-bounded search.

use std::borrow::Cow;

use serde::Serialize;

use crate::error::QueryError;
use crate::hypergraph::{CooccurrenceIndex, Hypergraph, NodeId};
use crate::index::{IndexTree, Position, Variant};
use crate::peeling::Peeler;
use crate::sets::Collector;

/// A `(k, g)` query, both parameters at least 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Query {
    k: u32,
    g: u32,
}

impl Query {
    pub fn new(k: u32, g: u32) -> Result<Self, QueryError> {
        if k == 0 || g == 0 {
            return Err(QueryError::NonPositive { k, g });
        }
        Ok(Self { k, g })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn g(self) -> u32 {
        self.g
    }

    pub fn position(self) -> Position {
        Position::new(self.k, self.g)
    }
}

/// Inclusive size window `[lb, ub]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeQuery {
    lb: usize,
    ub: usize,
}

impl SizeQuery {
    pub fn new(lb: usize, ub: usize) -> Result<Self, QueryError> {
        if lb > ub {
            return Err(QueryError::InvertedBounds { lb, ub });
        }
        Ok(Self { lb, ub })
    }

    pub fn lb(self) -> usize {
        self.lb
    }

    pub fn ub(self) -> usize {
        self.ub
    }

    pub fn contains(self, size: usize) -> bool {
        self.lb <= size && size <= self.ub
    }
}

/// One core whose size falls inside a [`SizeQuery`] window.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeHit {
    pub k: u32,
    pub g: u32,
    pub size: usize,
}

impl IndexTree {
    /// Answers `q` with the routine matching this tree's variant. Naive trees
    /// hand out the stored leaf without copying.
    pub fn query(&self, q: Query) -> Cow<'_, [NodeId]> {
        match self.variant() {
            Variant::Naive => Cow::Borrowed(naive_leaf(self, q)),
            Variant::LseH => Cow::Owned(horizontal(self, q)),
            Variant::LseHv => Cow::Owned(quadrant(self, q, false)),
            Variant::LseHvd => Cow::Owned(quadrant(self, q, true)),
        }
    }
}

fn expect(tree: &IndexTree, expected: Variant) -> Result<(), QueryError> {
    if tree.variant() == expected {
        Ok(())
    } else {
        Err(QueryError::WrongVariant {
            expected,
            actual: tree.variant(),
        })
    }
}

/// Direct leaf lookup; out-of-range positions give an empty slice.
pub fn query_naive(tree: &IndexTree, q: Query) -> Result<&[NodeId], QueryError> {
    expect(tree, Variant::Naive)?;
    Ok(naive_leaf(tree, q))
}

/// Union of leaf `(k, g)` and every leaf reached over next links.
pub fn query_lse_h(tree: &IndexTree, q: Query) -> Result<Vec<NodeId>, QueryError> {
    expect(tree, Variant::LseH)?;
    Ok(horizontal(tree, q))
}

/// Union over the quadrant `k' >= k, g' >= g`, walking jump links up the
/// branches and next links along each.
pub fn query_lse_hv(tree: &IndexTree, q: Query) -> Result<Vec<NodeId>, QueryError> {
    expect(tree, Variant::LseHv)?;
    Ok(quadrant(tree, q, false))
}

/// Like [`query_lse_hv`], also collecting aux depths `d <= (k' - k) + (g' - g)`
/// at every visited position `(k', g')`. The starting position therefore
/// contributes no aux nodes.
pub fn query_lse_hvd(tree: &IndexTree, q: Query) -> Result<Vec<NodeId>, QueryError> {
    expect(tree, Variant::LseHvd)?;
    Ok(quadrant(tree, q, true))
}

fn naive_leaf(tree: &IndexTree, q: Query) -> &[NodeId] {
    tree.leaf(q.position()).map_or(&[], |l| l.value())
}

fn horizontal(tree: &IndexTree, q: Query) -> Vec<NodeId> {
    let mut out = Collector::new(tree.node_count());
    let mut cur = tree.contains(q.position()).then(|| q.position());
    while let Some(p) = cur {
        out.extend(tree.leaf(p).expect("linked leaf exists").value());
        cur = tree.next(p);
    }
    out.into_vec()
}

fn quadrant(tree: &IndexTree, q: Query, with_aux: bool) -> Vec<NodeId> {
    let start = q.position();
    let mut out = Collector::new(tree.node_count());
    let mut row = tree.contains(start).then_some(start);
    while let Some(head) = row {
        let mut cur = Some(head);
        while let Some(p) = cur {
            let leaf = tree.leaf(p).expect("linked leaf exists");
            out.extend(leaf.value());
            if with_aux {
                if let Some(aux) = leaf.aux() {
                    let offset = (p.k - start.k) + (p.g - start.g);
                    for (_, nodes) in aux.depths_up_to(offset) {
                        out.extend(nodes);
                    }
                }
            }
            cur = tree.next(p);
        }
        row = tree.jump(head);
    }
    out.into_vec()
}

/// `|(k, g)-core|` from the size table, 0 when out of range.
pub fn core_size(tree: &IndexTree, q: Query) -> usize {
    tree.core_sizes().get(q.k, q.g)
}

/// Every non-empty core whose size lies in `[lb, ub]`, ordered by `(g, k)`.
///
/// Sizes are non-increasing in `k`, so each branch's window is found with two
/// binary searches.
pub fn size_bounded_query(tree: &IndexTree, sq: SizeQuery) -> Vec<SizeHit> {
    let table = tree.core_sizes();
    let mut hits = Vec::new();
    for g in 1..=table.g_star() {
        let sizes = table.branch(g);
        let lo = sizes.partition_point(|&s| s as usize > sq.ub);
        let hi = sizes.partition_point(|&s| s as usize >= sq.lb);
        for (i, &size) in sizes.iter().enumerate().take(hi).skip(lo) {
            hits.push(SizeHit {
                k: i as u32 + 1,
                g,
                size: size as usize,
            });
        }
    }
    hits
}

/// Index-free baseline: for each `g`, raise `k` and peel until the core
/// drops below `lb`.
pub fn size_bounded_query_peeling(graph: &Hypergraph, sq: SizeQuery) -> Vec<SizeHit> {
    let co = CooccurrenceIndex::build(graph);
    let peeler = Peeler::new(&co);
    let mut hits = Vec::new();
    for g in 1.. {
        let mut outer = None;
        peeler.for_each_core_size(g, |k, size| {
            if k == 1 {
                outer = Some(size);
            }
            if size < sq.lb {
                return false;
            }
            if size <= sq.ub {
                hits.push(SizeHit { k, g, size });
            }
            true
        });
        // Cores only shrink as g grows, so a small (1, g)-core ends the search.
        match outer {
            Some(size) if size >= sq.lb => {}
            _ => break,
        }
    }
    hits
}
