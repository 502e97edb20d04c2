//! Height-2 index trees over all `(k, g)`-cores.
//!
//! The root fans out by `g`, each branch holds one leaf per `k`, and a leaf's
//! content depends on the [`Variant`]:
//!
//! | variant   | leaf `(k, g)` holds                                         |
//! |-----------|-------------------------------------------------------------|
//! | `Naive`   | the whole `(k, g)`-core                                     |
//! | `LseH`    | nodes whose `g`-coreness is exactly `k`                     |
//! | `LseHv`   | nodes with `g`-coreness exactly `k` and `k`-coreness exactly `g` |
//! | `LseHvd`  | the `LseHv` leaf minus nodes moved into auxiliary nodes     |
//!
//! Links are positional: the next link of `(k, g)` is `(k + 1, g)` and the
//! jump link is `(k, g + 1)`, each present only when the target leaf exists.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::hypergraph::{Fingerprint, Hypergraph, LabelDict, NodeId};
use crate::peeling::{coreness_tables_with, CorenessTable, ShellDecomposition};
use crate::sets;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Naive,
    LseH,
    LseHv,
    LseHvd,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Naive,
        Variant::LseH,
        Variant::LseHv,
        Variant::LseHvd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::LseH => "lse-h",
            Variant::LseHv => "lse-hv",
            Variant::LseHvd => "lse-hvd",
        }
    }

    /// Whether leaves carry jump links.
    pub fn has_jump_links(self) -> bool {
        matches!(self, Variant::LseHv | Variant::LseHvd)
    }

    pub fn has_next_links(self) -> bool {
        self != Variant::Naive
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                format!("unknown variant `{s}` (expected naive, lse-h, lse-hv or lse-hvd)")
            })
    }
}

/// Root-to-leaf address: branch `g`, then leaf `k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Position {
    pub k: u32,
    pub g: u32,
}

impl Position {
    pub fn new(k: u32, g: u32) -> Self {
        Self { k, g }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.g)
    }
}

/// Depth-keyed node sets hanging off one leaf position.
///
/// A node at depth `d` of the aux node at `(k, g)` stands for membership in
/// the `d + 1` diagonal leaves `(k - d, g), (k - d + 1, g - 1), ..., (k, g - d)`
/// of the `LseHv` tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuxNode {
    depths: BTreeMap<u32, Vec<NodeId>>,
}

impl AuxNode {
    pub fn depth(&self, d: u32) -> &[NodeId] {
        self.depths.get(&d).map_or(&[], Vec::as_slice)
    }

    /// Non-empty depth sets, ascending by depth.
    pub fn depths(&self) -> impl Iterator<Item = (u32, &[NodeId])> {
        self.depths.iter().map(|(&d, s)| (d, s.as_slice()))
    }

    /// Depth sets with `1 <= d <= max_depth`.
    pub fn depths_up_to(&self, max_depth: u32) -> impl Iterator<Item = (u32, &[NodeId])> {
        self.depths
            .range(..=max_depth)
            .map(|(&d, s)| (d, s.as_slice()))
    }

    pub fn entry_count(&self) -> usize {
        self.depths.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub(crate) fn take(&mut self, d: u32) -> Vec<NodeId> {
        self.depths.remove(&d).unwrap_or_default()
    }

    pub(crate) fn put(&mut self, d: u32, nodes: Vec<NodeId>) {
        if nodes.is_empty() {
            return;
        }
        let slot = self.depths.entry(d).or_default();
        if slot.is_empty() {
            *slot = nodes;
        } else {
            *slot = sets::union(slot, &nodes);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeafNode {
    value: Vec<NodeId>,
    aux: Option<AuxNode>,
}

impl LeafNode {
    pub fn new(value: Vec<NodeId>) -> Self {
        Self { value, aux: None }
    }

    pub fn value(&self) -> &[NodeId] {
        &self.value
    }

    pub fn aux(&self) -> Option<&AuxNode> {
        self.aux.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub(crate) fn set_aux(&mut self, aux: AuxNode) {
        self.aux = (!aux.is_empty()).then_some(aux);
    }
}

/// All leaves under one `g` edge of the root; `leaves[k - 1]` is leaf `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    g: u32,
    leaves: Vec<LeafNode>,
}

impl Branch {
    pub(crate) fn new(g: u32, leaves: Vec<LeafNode>) -> Self {
        Self { g, leaves }
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn k_max(&self) -> u32 {
        self.leaves.len() as u32
    }

    pub fn leaf(&self, k: u32) -> Option<&LeafNode> {
        k.checked_sub(1).and_then(|i| self.leaves.get(i as usize))
    }

    pub fn leaves(&self) -> &[LeafNode] {
        &self.leaves
    }
}

/// `sizes[g - 1][k - 1] = |(k, g)-core|` for every non-empty core.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoreSizeTable {
    sizes: Vec<Vec<u32>>,
}

impl CoreSizeTable {
    pub fn from_shells(decompositions: &[ShellDecomposition]) -> Self {
        Self {
            sizes: decompositions
                .iter()
                .map(ShellDecomposition::core_sizes)
                .collect(),
        }
    }

    pub(crate) fn from_rows(sizes: Vec<Vec<u32>>) -> Self {
        Self { sizes }
    }

    pub fn g_star(&self) -> u32 {
        self.sizes.len() as u32
    }

    /// Sizes for branch `g`, non-increasing in `k`.
    pub fn branch(&self, g: u32) -> &[u32] {
        g.checked_sub(1)
            .and_then(|i| self.sizes.get(i as usize))
            .map_or(&[], Vec::as_slice)
    }

    /// `|(k, g)-core|`, 0 when out of range.
    pub fn get(&self, k: u32, g: u32) -> usize {
        k.checked_sub(1)
            .and_then(|i| self.branch(g).get(i as usize))
            .map_or(0, |&s| s as usize)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.sizes
    }

    /// Every `(position, size)` pair, ordered by `(g, k)`.
    pub fn iter(&self) -> impl Iterator<Item = (Position, usize)> + '_ {
        self.sizes.iter().enumerate().flat_map(|(gi, row)| {
            row.iter()
                .enumerate()
                .map(move |(ki, &s)| (Position::new(ki as u32 + 1, gi as u32 + 1), s as usize))
        })
    }
}

/// Build-time knobs.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Worker threads for the per-`g` shell passes; `1` runs sequentially.
    pub threads: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTree {
    variant: Variant,
    node_count: usize,
    branches: Vec<Branch>,
    core_sizes: CoreSizeTable,
    labels: LabelDict,
    fingerprint: Fingerprint,
}

pub fn build_naive(graph: &Hypergraph) -> IndexTree {
    IndexTree::build(graph, Variant::Naive)
}

pub fn build_lse_h(graph: &Hypergraph) -> IndexTree {
    IndexTree::build(graph, Variant::LseH)
}

pub fn build_lse_hv(graph: &Hypergraph) -> IndexTree {
    IndexTree::build(graph, Variant::LseHv)
}

pub fn build_lse_hvd(graph: &Hypergraph) -> IndexTree {
    IndexTree::build(graph, Variant::LseHvd)
}

/// Suffix sums of shell sizes for every branch.
pub fn build_core_size_table(decompositions: &[ShellDecomposition]) -> CoreSizeTable {
    CoreSizeTable::from_shells(decompositions)
}

impl IndexTree {
    pub fn build(graph: &Hypergraph, variant: Variant) -> Self {
        Self::build_with(graph, variant, BuildOptions::default())
    }

    pub fn build_with(graph: &Hypergraph, variant: Variant, opts: BuildOptions) -> Self {
        let table = coreness_tables_with(graph, opts.threads);
        Self::from_coreness(graph, &table, variant)
    }

    /// Assembles a tree from an existing decomposition, so several variants
    /// can share one peeling pass.
    pub fn from_coreness(graph: &Hypergraph, table: &CorenessTable, variant: Variant) -> Self {
        let decompositions = table.decompositions();
        let branches = match variant {
            Variant::Naive => naive_branches(decompositions),
            Variant::LseH => horizontal_branches(decompositions),
            Variant::LseHv => vertical_branches(decompositions),
            Variant::LseHvd => {
                let mut branches = vertical_branches(decompositions);
                diagonal_sweep(&mut branches);
                branches
            }
        };
        Self {
            variant,
            node_count: graph.node_count(),
            branches,
            core_sizes: CoreSizeTable::from_shells(decompositions),
            labels: graph.labels().clone(),
            fingerprint: graph.fingerprint(),
        }
    }

    pub(crate) fn from_parts(
        variant: Variant,
        branches: Vec<Branch>,
        core_sizes: CoreSizeTable,
        labels: LabelDict,
        fingerprint: Fingerprint,
    ) -> Self {
        Self {
            variant,
            node_count: labels.len(),
            branches,
            core_sizes,
            labels,
            fingerprint,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn g_star(&self) -> u32 {
        self.branches.len() as u32
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, g: u32) -> Option<&Branch> {
        g.checked_sub(1).and_then(|i| self.branches.get(i as usize))
    }

    /// Number of leaves in branch `g` (0 for a missing branch).
    pub fn k_max(&self, g: u32) -> u32 {
        self.branch(g).map_or(0, Branch::k_max)
    }

    pub fn leaf(&self, pos: Position) -> Option<&LeafNode> {
        self.branch(pos.g).and_then(|b| b.leaf(pos.k))
    }

    pub fn contains(&self, pos: Position) -> bool {
        self.leaf(pos).is_some()
    }

    /// Target of the next link of `pos`.
    pub fn next(&self, pos: Position) -> Option<Position> {
        if !self.variant.has_next_links() || !self.contains(pos) {
            return None;
        }
        let to = Position::new(pos.k + 1, pos.g);
        self.contains(to).then_some(to)
    }

    /// Target of the jump link of `pos`.
    pub fn jump(&self, pos: Position) -> Option<Position> {
        if !self.variant.has_jump_links() || !self.contains(pos) {
            return None;
        }
        let to = Position::new(pos.k, pos.g + 1);
        self.contains(to).then_some(to)
    }

    /// All leaf positions, ordered by `(g, k)`.
    pub fn positions(&self) -> impl Iterator<Item = (Position, &LeafNode)> + '_ {
        self.branches.iter().flat_map(|b| {
            b.leaves
                .iter()
                .enumerate()
                .map(move |(i, leaf)| (Position::new(i as u32 + 1, b.g), leaf))
        })
    }

    /// Non-empty aux nodes, ordered by `(g, k)`.
    pub fn aux_nodes(&self) -> impl Iterator<Item = (Position, &AuxNode)> + '_ {
        self.positions()
            .filter_map(|(p, leaf)| leaf.aux().map(|a| (p, a)))
    }

    pub fn core_sizes(&self) -> &CoreSizeTable {
        &self.core_sizes
    }

    pub fn labels(&self) -> &LabelDict {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        self.labels.label(v)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    /// Stored node occurrences across all leaves and aux depths.
    pub fn entry_count(&self) -> usize {
        self.positions()
            .map(|(_, leaf)| leaf.value.len() + leaf.aux().map_or(0, AuxNode::entry_count))
            .sum()
    }

    /// Checks that a dataset matches the one this tree was built from.
    pub fn verify_source(
        &self,
        graph: &Hypergraph,
    ) -> Result<(), crate::error::FingerprintMismatch> {
        let actual = graph.fingerprint();
        if actual == self.fingerprint {
            Ok(())
        } else {
            Err(crate::error::FingerprintMismatch {
                expected: self.fingerprint,
                actual,
            })
        }
    }
}

fn naive_branches(decompositions: &[ShellDecomposition]) -> Vec<Branch> {
    decompositions
        .iter()
        .map(|d| {
            // Walk shells from the innermost outward, accumulating the core.
            let mut leaves = Vec::with_capacity(d.k_max() as usize);
            let mut acc: Vec<NodeId> = Vec::new();
            for shell in d.shells().iter().rev() {
                acc = sets::union(&acc, shell);
                leaves.push(LeafNode::new(acc.clone()));
            }
            leaves.reverse();
            Branch::new(d.g(), leaves)
        })
        .collect()
}

fn horizontal_branches(decompositions: &[ShellDecomposition]) -> Vec<Branch> {
    decompositions
        .iter()
        .map(|d| {
            let leaves = d
                .shells()
                .iter()
                .map(|s| LeafNode::new(s.clone()))
                .collect();
            Branch::new(d.g(), leaves)
        })
        .collect()
}

/// `leaf(k, g) = shell_g(k) \ shell_{g+1}(k)`. Since `g`-coreness never grows
/// with `g`, a node of `shell_g(k)` is in the `(k, g + 1)`-core exactly when
/// it sits in `shell_{g+1}(k)`, so the difference keeps the nodes whose
/// `k`-coreness is exactly `g`.
fn vertical_branches(decompositions: &[ShellDecomposition]) -> Vec<Branch> {
    decompositions
        .iter()
        .enumerate()
        .map(|(gi, d)| {
            let upper = decompositions.get(gi + 1);
            let leaves = d
                .shells()
                .iter()
                .enumerate()
                .map(|(ki, shell)| {
                    let above = upper.map_or(&[][..], |u| u.shell(ki as u32 + 1));
                    LeafNode::new(sets::difference(shell, above))
                })
                .collect();
            Branch::new(d.g(), leaves)
        })
        .collect()
}

/// Moves nodes shared by diagonally adjacent positions into aux nodes.
///
/// Positions `(k, g)` are visited by increasing `k + g`, ties by increasing
/// `g`. For each, the nodes common to leaves `(k + 1, g)` and `(k, g + 1)` go
/// to depth 1 of the aux node at `(k + 1, g + 1)`, and for every depth `d`
/// present in both aux nodes `(k + 1, g)` and `(k, g + 1)` their common nodes
/// go to depth `d + 1`. Moved nodes are deleted from their sources. A missing
/// leaf at the intersection is created empty, extending its branch.
fn diagonal_sweep(branches: &mut [Branch]) {
    let g_star = branches.len() as u32;
    if g_star < 2 {
        return;
    }
    // Extensions only reach k + 1 where leaf (k + 1, g) exists, so the widest
    // branch bounds the sweep.
    let k_top = branches.iter().map(Branch::k_max).max().unwrap_or(0);
    for sum in 2..=(k_top + g_star) {
        for g in 1..g_star {
            if sum <= g {
                break;
            }
            let k = sum - g;
            if k > k_top {
                continue;
            }
            sweep_position(branches, k, g);
        }
    }
}

fn sweep_position(branches: &mut [Branch], k: u32, g: u32) {
    let lower = (g - 1) as usize; // branch g holds (k + 1, g)
    let upper = g as usize; // branch g + 1 holds (k, g + 1) and the target
    let (lo, hi) = branches.split_at_mut(upper);
    let right = lo[lower].leaves.get_mut(k as usize); // leaf (k + 1, g)
    let up = hi[0].leaves.get_mut(k as usize - 1); // leaf (k, g + 1)
    let (Some(right), Some(up)) = (right, up) else {
        return;
    };

    let mut moved: Vec<(u32, Vec<NodeId>)> = Vec::new();

    let common = sets::intersection(&right.value, &up.value);
    if !common.is_empty() {
        right.value = sets::difference(&right.value, &common);
        up.value = sets::difference(&up.value, &common);
        moved.push((1, common));
    }

    if let (Some(ra), Some(ua)) = (right.aux.as_mut(), up.aux.as_mut()) {
        let shared: Vec<u32> = ra
            .depths
            .keys()
            .filter(|d| ua.depths.contains_key(d))
            .copied()
            .collect();
        for d in shared {
            let a = ra.take(d);
            let b = ua.take(d);
            let common = sets::intersection(&a, &b);
            ra.put(d, sets::difference(&a, &common));
            ua.put(d, sets::difference(&b, &common));
            if !common.is_empty() {
                moved.push((d + 1, common));
            }
        }
        if ra.is_empty() {
            right.aux = None;
        }
        if ua.is_empty() {
            up.aux = None;
        }
    }

    if moved.is_empty() {
        return;
    }
    let target_branch = &mut hi[0];
    let target_idx = k as usize; // leaf (k + 1, g + 1)
    if target_branch.leaves.len() <= target_idx {
        target_branch
            .leaves
            .resize_with(target_idx + 1, LeafNode::default);
    }
    let target = &mut target_branch.leaves[target_idx];
    let mut aux = target.aux.take().unwrap_or_default();
    for (d, nodes) in moved {
        aux.put(d, nodes);
    }
    target.set_aux(aux);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Hypergraph {
        "1 2 3\n1 2 3\n1 2 4\n3 4 5\n4 5 6\n4 5 6\n"
            .parse()
            .unwrap()
    }

    fn value(g: &Hypergraph, t: &IndexTree, k: u32, gg: u32) -> Vec<String> {
        let mut out: Vec<String> = t
            .leaf(Position::new(k, gg))
            .unwrap()
            .value()
            .iter()
            .map(|&v| g.label(v).to_owned())
            .collect();
        out.sort();
        out
    }

    fn ids(g: &Hypergraph, labels: &[&str]) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = labels.iter().map(|l| g.id(l).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn toy_naive() {
        let g = toy();
        let t = build_naive(&g);
        assert_eq!(t.positions().filter(|(_, l)| !l.is_empty()).count(), 6);
        assert_eq!(t.entry_count(), 32);
        assert_eq!(value(&g, &t, 1, 3), ["1", "2", "4", "5"]);
        assert_eq!(t.next(Position::new(1, 1)), None);
        assert_eq!(t.jump(Position::new(1, 1)), None);
    }

    #[test]
    fn toy_lse_h() {
        let g = toy();
        let t = build_lse_h(&g);
        assert_eq!(t.k_max(1), 3);
        assert!(value(&g, &t, 1, 1).is_empty());
        assert_eq!(value(&g, &t, 2, 1), ["5", "6"]);
        assert_eq!(value(&g, &t, 3, 1), ["1", "2", "3", "4"]);
        assert!(value(&g, &t, 1, 2).is_empty());
        assert_eq!(value(&g, &t, 2, 2).len(), 6);
        assert_eq!(value(&g, &t, 1, 3), ["1", "2", "4", "5"]);
        assert_eq!(t.entry_count(), 16);
        assert_eq!(t.next(Position::new(2, 1)), Some(Position::new(3, 1)));
        assert_eq!(t.next(Position::new(3, 1)), None);
        assert_eq!(t.jump(Position::new(1, 1)), None);
    }

    #[test]
    fn toy_lse_hv() {
        let g = toy();
        let t = build_lse_hv(&g);
        assert_eq!(value(&g, &t, 3, 1), ["1", "2", "3", "4"]);
        assert_eq!(value(&g, &t, 2, 2).len(), 6);
        assert_eq!(value(&g, &t, 1, 3), ["1", "2", "4", "5"]);
        for p in [(1, 1), (2, 1), (1, 2)] {
            assert!(value(&g, &t, p.0, p.1).is_empty());
        }
        assert_eq!(t.entry_count(), 14);
        let five = g.id("5").unwrap();
        let holding: Vec<Position> = t
            .positions()
            .filter(|(_, l)| l.value().contains(&five))
            .map(|(p, _)| p)
            .collect();
        assert_eq!(holding, [Position::new(2, 2), Position::new(1, 3)]);
        assert_eq!(t.jump(Position::new(1, 2)), Some(Position::new(1, 3)));
        assert_eq!(t.jump(Position::new(2, 2)), None);
    }

    #[test]
    fn toy_lse_hvd() {
        let g = toy();
        let t = build_lse_hvd(&g);
        assert_eq!(value(&g, &t, 2, 2), ["6"]);
        assert_eq!(value(&g, &t, 1, 3), ["1", "2", "4"]);
        type Depths = Vec<(u32, Vec<NodeId>)>;
        let aux: Vec<(Position, Depths)> = t
            .aux_nodes()
            .map(|(p, a)| (p, a.depths().map(|(d, s)| (d, s.to_vec())).collect()))
            .collect();
        assert_eq!(
            aux,
            [
                (
                    Position::new(3, 2),
                    vec![(1, ids(&g, &["1", "2", "3", "4"]))]
                ),
                (Position::new(2, 3), vec![(1, ids(&g, &["5"]))]),
            ]
        );
        // Intersection leaves were created empty and extend the branches.
        assert_eq!((t.k_max(1), t.k_max(2), t.k_max(3)), (3, 3, 2));
        assert!(t.leaf(Position::new(3, 2)).unwrap().is_empty());
        assert_eq!(t.next(Position::new(2, 2)), Some(Position::new(3, 2)));
        assert_eq!(t.jump(Position::new(2, 2)), Some(Position::new(2, 3)));
        assert_eq!(t.entry_count(), 9);
        let nonempty = t.positions().filter(|(_, l)| !l.is_empty()).count();
        assert_eq!(nonempty, 2);
    }

    #[test]
    fn empty_graph_has_no_branches() {
        let g = Hypergraph::default();
        for v in Variant::ALL {
            let t = IndexTree::build(&g, v);
            assert_eq!(t.g_star(), 0);
            assert_eq!(t.entry_count(), 0);
        }
    }

    #[test]
    fn toy_core_size_table() {
        let t = build_lse_h(&toy());
        assert_eq!(t.core_sizes().rows(), &[vec![6, 6, 4], vec![6, 6], vec![4]]);
        assert_eq!(t.core_sizes().get(1, 2), 6);
        assert_eq!(t.core_sizes().get(4, 1), 0);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("lse".parse::<Variant>().is_err());
    }

    #[test]
    fn threaded_build_matches_sequential() {
        let g = toy();
        for v in Variant::ALL {
            assert_eq!(
                IndexTree::build_with(&g, v, BuildOptions { threads: 4 }),
                IndexTree::build(&g, v)
            );
        }
    }
}
