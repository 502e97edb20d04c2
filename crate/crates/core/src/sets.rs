//! Operations on ascending, duplicate-free node lists.

use std::cmp::Ordering;

use crate::hypergraph::NodeId;

pub(crate) fn intersection(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn difference(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

pub(crate) fn union(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Bitmap over the node universe; drains into an ascending list.
pub(crate) struct Collector {
    words: Vec<u64>,
    len: usize,
}

impl Collector {
    pub(crate) fn new(node_count: usize) -> Self {
        Self {
            words: vec![0; node_count.div_ceil(64)],
            len: 0,
        }
    }

    pub(crate) fn extend(&mut self, nodes: &[NodeId]) {
        for &v in nodes {
            let (w, b) = (v.index() / 64, v.index() % 64);
            let bit = 1u64 << b;
            if self.words[w] & bit == 0 {
                self.words[w] |= bit;
                self.len += 1;
            }
        }
    }

    pub(crate) fn into_vec(self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len);
        for (i, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros();
                out.push(NodeId(i as u32 * 64 + b));
                w &= w - 1;
            }
        }
        out
    }
}
