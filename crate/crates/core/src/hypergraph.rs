//! Hypergraph storage, dataset parsing and pairwise co-occurrence counts.
//!
//! Node labels are interned into dense [`NodeId`]s in first-appearance order.
//! Hyperedges form an ordered multiset: a line repeated twice in the input is
//! two distinct edges and raises every pair count it covers by two.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{ParseError, ParseErrorKind};

/// Dense internal node identifier in `0..node_count`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A hyperedge: a non-empty set of nodes, stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    members: Vec<NodeId>,
}

impl Hyperedge {
    /// Builds an edge from arbitrary members, dropping duplicates.
    /// Returns `None` for an empty member list.
    pub fn new(mut members: Vec<NodeId>) -> Option<Self> {
        if members.is_empty() {
            return None;
        }
        members.sort_unstable();
        members.dedup();
        Some(Self { members })
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Bidirectional map between external labels and internal ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelDict {
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
}

impl LabelDict {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a dictionary from labels listed in id order.
    /// Returns the offending label if the list contains a duplicate.
    pub fn from_labels(labels: Vec<String>) -> Result<Self, String> {
        let mut ids = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if ids.insert(label.clone(), NodeId(i as u32)).is_some() {
                return Err(label.clone());
            }
        }
        Ok(Self { labels, ids })
    }

    /// Returns the id of `label`, assigning the next free id on first sight.
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.ids.insert(label.to_owned(), id);
        id
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.index()]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in id order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Which tokens the parser accepts as node labels.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum LabelKind {
    /// Any non-whitespace token.
    #[default]
    Text,
    /// Unsigned decimal integers only.
    Integer,
}

impl LabelKind {
    fn accepts(self, token: &str) -> bool {
        match self {
            LabelKind::Text => true,
            LabelKind::Integer => token.parse::<u64>().is_ok(),
        }
    }
}

/// Stable content hash of a dataset, used to tie an index file to its input.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint(pub u64);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for Fingerprint {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        u64::from_str_radix(s, 16).map(Fingerprint)
    }
}

/// An undirected, unweighted hypergraph `G = (V, E)`.
#[derive(Clone, Debug, Default)]
pub struct Hypergraph {
    labels: LabelDict,
    edges: Vec<Hyperedge>,
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Builds a hypergraph from edges given as label lists. Empty edges are
    /// skipped; repeated labels inside one edge collapse.
    pub fn from_edges<I, E, S>(edges: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = Builder::default();
        let mut scratch = Vec::new();
        for edge in edges {
            scratch.clear();
            scratch.extend(edge.into_iter().map(|s| builder.labels.intern(s.as_ref())));
            builder.push_edge(scratch.iter().copied());
        }
        builder.finish()
    }

    /// Parses the line-oriented dataset format, accepting any token as a label.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, ParseError> {
        Self::parse_with(reader, LabelKind::Text)
    }

    /// Parses the dataset format: one hyperedge per line, whitespace-separated
    /// labels, `#` comment lines and blank lines skipped.
    pub fn parse_with<R: BufRead>(reader: R, kind: LabelKind) -> Result<Self, ParseError> {
        let mut builder = Builder::default();
        let mut scratch = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| ParseError {
                line: line_no,
                kind: ParseErrorKind::Io(e),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            scratch.clear();
            for token in trimmed.split_whitespace() {
                if !kind.accepts(token) {
                    return Err(ParseError {
                        line: line_no,
                        kind: ParseErrorKind::InvalidLabel(token.to_owned()),
                    });
                }
                scratch.push(builder.labels.intern(token));
            }
            builder.push_edge(scratch.iter().copied());
        }
        Ok(builder.finish())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + DoubleEndedIterator {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Hyperedge {
        &self.edges[e]
    }

    /// Indices of the edges containing `v`, ascending.
    pub fn incidence(&self, v: NodeId) -> &[u32] {
        &self.incidence[v.index()]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn labels(&self) -> &LabelDict {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        self.labels.label(v)
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.labels.id(label)
    }

    /// Co-occurrence counts `c(v, w)` for every `w` in `alive`, `w != v`.
    ///
    /// Counts are taken over the original edges. Because the induced edge
    /// multiset keeps one `e ∩ alive` per original edge, the restricted count
    /// equals the original one for surviving pairs.
    ///
    /// # Panics
    ///
    /// Panics if `v` is not marked alive or `alive` is shorter than the node
    /// universe.
    pub fn cooccurrence(&self, v: NodeId, alive: &[bool]) -> CooccurrenceMap {
        assert!(
            alive.len() >= self.node_count(),
            "alive mask covers {} of {} nodes",
            alive.len(),
            self.node_count()
        );
        assert!(alive[v.index()], "node {v} is not in the alive set");
        let mut counts = BTreeMap::new();
        for &e in self.incidence(v) {
            for &w in self.edges[e as usize].members() {
                if w != v && alive[w.index()] {
                    *counts.entry(w).or_insert(0u32) += 1;
                }
            }
        }
        CooccurrenceMap(counts)
    }

    /// `|V|`, `|E|` and the mean neighbour count.
    pub fn stats(&self) -> GraphStats {
        let n = self.node_count();
        let mut scratch = NeighbourScratch::new(n);
        let total: usize = self.nodes().map(|v| scratch.collect(self, v).len()).sum();
        GraphStats {
            nodes: n,
            edges: self.edge_count(),
            mean_neighbours: if n == 0 { 0.0 } else { total as f64 / n as f64 },
        }
    }

    /// Writes the graph back in the dataset format, one edge per line.
    pub fn write_lines<W: Write>(&self, mut out: W) -> io::Result<()> {
        for edge in &self.edges {
            let mut first = true;
            for &v in edge.members() {
                if !first {
                    out.write_all(b" ")?;
                }
                first = false;
                out.write_all(self.label(v).as_bytes())?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Hash of the canonical dataset serialization.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut buf = Vec::new();
        self.write_lines(&mut buf)
            .expect("writing to a Vec cannot fail");
        let digest = Sha256::digest(&buf);
        let mut word = [0u8; 8];
        word.copy_from_slice(&digest[..8]);
        Fingerprint(u64::from_be_bytes(word))
    }
}

impl FromStr for Hypergraph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s.as_bytes())
    }
}

/// Convenience wrapper over [`Hypergraph::parse`].
pub fn parse_dataset<R: BufRead>(reader: R) -> Result<Hypergraph, ParseError> {
    Hypergraph::parse(reader)
}

#[derive(Default)]
struct Builder {
    labels: LabelDict,
    edges: Vec<Hyperedge>,
}

impl Builder {
    fn push_edge(&mut self, members: impl Iterator<Item = NodeId>) {
        if let Some(edge) = Hyperedge::new(members.collect()) {
            self.edges.push(edge);
        }
    }

    fn finish(self) -> Hypergraph {
        let mut incidence = vec![Vec::new(); self.labels.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in edge.members() {
                incidence[v.index()].push(e as u32);
            }
        }
        Hypergraph {
            labels: self.labels,
            edges: self.edges,
            incidence,
        }
    }
}

/// `|V|`, `|E|` and `μ(N(.))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub mean_neighbours: f64,
}

/// Neighbour → shared-edge count for one node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CooccurrenceMap(BTreeMap<NodeId, u32>);

impl CooccurrenceMap {
    pub fn get(&self, w: NodeId) -> u32 {
        self.0.get(&w).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.0.iter().map(|(&w, &c)| (w, c))
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.0.values().map(|&c| c as u64).sum()
    }
}

/// Dense counting buffer reused across nodes.
struct NeighbourScratch {
    counts: Vec<u32>,
    touched: Vec<NodeId>,
}

impl NeighbourScratch {
    fn new(n: usize) -> Self {
        Self {
            counts: vec![0; n],
            touched: Vec::new(),
        }
    }

    /// Fills `touched` with the neighbours of `v`; counts stay readable until
    /// the next call.
    fn collect(&mut self, graph: &Hypergraph, v: NodeId) -> &[NodeId] {
        for &w in &self.touched {
            self.counts[w.index()] = 0;
        }
        self.touched.clear();
        for &e in graph.incidence(v) {
            for &w in graph.edges[e as usize].members() {
                if w == v {
                    continue;
                }
                let c = &mut self.counts[w.index()];
                if *c == 0 {
                    self.touched.push(w);
                }
                *c += 1;
            }
        }
        &self.touched
    }

    fn sorted_row(&mut self, graph: &Hypergraph, v: NodeId) -> Vec<(NodeId, u32)> {
        self.collect(graph, v);
        let mut row: Vec<(NodeId, u32)> = self
            .touched
            .iter()
            .map(|&w| (w, self.counts[w.index()]))
            .collect();
        row.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        row
    }
}

/// Whole-graph co-occurrence table in compressed rows.
///
/// Each row is sorted by count descending, so the neighbours sharing at least
/// `g` edges with a node form a prefix of its row.
#[derive(Clone, Debug)]
pub struct CooccurrenceIndex {
    offsets: Vec<usize>,
    neighbours: Vec<NodeId>,
    counts: Vec<u32>,
}

impl CooccurrenceIndex {
    pub fn build(graph: &Hypergraph) -> Self {
        let mut scratch = NeighbourScratch::new(graph.node_count());
        let rows: Vec<_> = graph
            .nodes()
            .map(|v| scratch.sorted_row(graph, v))
            .collect();
        Self::from_rows(rows)
    }

    /// Same as [`build`](Self::build), computing rows on the current rayon pool.
    pub fn build_parallel(graph: &Hypergraph) -> Self {
        let n = graph.node_count();
        let rows: Vec<_> = (0..n as u32)
            .into_par_iter()
            .map_init(
                || NeighbourScratch::new(n),
                |scratch, v| scratch.sorted_row(graph, NodeId(v)),
            )
            .collect();
        Self::from_rows(rows)
    }

    fn from_rows(rows: Vec<Vec<(NodeId, u32)>>) -> Self {
        let total = rows.iter().map(Vec::len).sum();
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut neighbours = Vec::with_capacity(total);
        let mut counts = Vec::with_capacity(total);
        offsets.push(0);
        for row in rows {
            for (w, c) in row {
                neighbours.push(w);
                counts.push(c);
            }
            offsets.push(neighbours.len());
        }
        Self {
            offsets,
            neighbours,
            counts,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    fn range(&self, v: NodeId) -> std::ops::Range<usize> {
        self.offsets[v.index()]..self.offsets[v.index() + 1]
    }

    /// `(w, c(v, w))` for every neighbour, largest count first.
    pub fn row(&self, v: NodeId) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        let r = self.range(v);
        self.neighbours[r.clone()]
            .iter()
            .copied()
            .zip(self.counts[r].iter().copied())
    }

    /// Neighbours `w` with `c(v, w) >= g`.
    pub fn qualified(&self, v: NodeId, g: u32) -> &[NodeId] {
        let r = self.range(v);
        let len = self.counts[r.clone()].partition_point(|&c| c >= g);
        &self.neighbours[r.start..r.start + len]
    }

    pub fn neighbour_count(&self, v: NodeId) -> usize {
        self.range(v).len()
    }

    /// Largest pair count in the graph, which is also the largest `g` with a
    /// non-empty `(1, g)`-core.
    pub fn max_count(&self) -> u32 {
        (0..self.node_count())
            .filter_map(|v| {
                let start = self.offsets[v];
                (start < self.offsets[v + 1]).then(|| self.counts[start])
            })
            .max()
            .unwrap_or(0)
    }
}
