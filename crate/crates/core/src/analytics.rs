//! Storage accounting, tree statistics and timing harnesses.

use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::gen::GenConfig;
use crate::hypergraph::{GraphStats, Hypergraph, NodeId};
use crate::index::{BuildOptions, CoreSizeTable, IndexTree, Position, Variant};
use crate::peeling::{coreness_tables_with, kg_core};
use crate::query::Query;
use crate::sets;

/// Bytes charged per stored node occurrence.
pub const BYTES_PER_ENTRY: usize = 8;
/// Bytes charged per stored set (leaf value or aux depth set).
pub const BYTES_PER_SET: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexStats {
    pub variant: Variant,
    /// Node occurrences across all leaves and aux depth sets.
    pub total_entries: usize,
    pub leaf_entries: usize,
    pub aux_entries: usize,
    /// `total_entries * BYTES_PER_ENTRY + (leaf_count + aux_depth_sets) * BYTES_PER_SET`.
    pub approx_bytes: usize,
    pub leaf_count: usize,
    pub empty_leaf_count: usize,
    /// Positions whose aux node has at least one non-empty depth.
    pub aux_count: usize,
    pub aux_depth_sets: usize,
    pub max_aux_depth: u32,
    /// Mean depth over non-empty aux depth sets.
    pub mean_aux_depth: f64,
    /// Mean number of nodes per aux node.
    pub mean_aux_size: f64,
}

impl IndexStats {
    pub fn empty_leaf_ratio(&self) -> f64 {
        ratio(self.empty_leaf_count, self.leaf_count)
    }

    pub fn aux_leaf_ratio(&self) -> f64 {
        ratio(self.aux_count, self.leaf_count)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn storage_stats(tree: &IndexTree) -> IndexStats {
    let mut leaf_count = 0;
    let mut empty_leaf_count = 0;
    let mut leaf_entries = 0;
    for (_, leaf) in tree.positions() {
        leaf_count += 1;
        leaf_entries += leaf.value().len();
        if leaf.is_empty() {
            empty_leaf_count += 1;
        }
    }
    let mut aux_count = 0;
    let mut aux_entries = 0;
    let mut depth_sets = 0;
    let mut depth_sum = 0u64;
    let mut max_aux_depth = 0;
    for (_, aux) in tree.aux_nodes() {
        aux_count += 1;
        aux_entries += aux.entry_count();
        for (d, _) in aux.depths() {
            depth_sets += 1;
            depth_sum += d as u64;
            max_aux_depth = max_aux_depth.max(d);
        }
    }
    let total_entries = leaf_entries + aux_entries;
    IndexStats {
        variant: tree.variant(),
        total_entries,
        leaf_entries,
        aux_entries,
        approx_bytes: total_entries * BYTES_PER_ENTRY + (leaf_count + depth_sets) * BYTES_PER_SET,
        leaf_count,
        empty_leaf_count,
        aux_count,
        aux_depth_sets: depth_sets,
        max_aux_depth,
        mean_aux_depth: ratio(depth_sum as usize, depth_sets),
        mean_aux_size: ratio(aux_entries, aux_count),
    }
}

/// Jaccard overlap of the two diagonal neighbours `(k - 1, g)` and
/// `(k, g - 1)` of `position`. `None` when both are empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JaccardCell {
    pub position: Position,
    pub jaccard: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalJaccard {
    pub variant: Variant,
    pub cells: Vec<JaccardCell>,
    /// Mean over cells with a defined score.
    pub mean: Option<f64>,
}

pub fn jaccard(a: &[NodeId], b: &[NodeId]) -> Option<f64> {
    let inter = sets::intersection(a, b).len();
    let union = a.len() + b.len() - inter;
    (union > 0).then(|| inter as f64 / union as f64)
}

/// Diagonal overlap for every position where both diagonal neighbours exist
/// as leaves of `tree`. Pass a naive tree for core-level overlap or an
/// `LseHv` tree for exact-coreness leaves.
pub fn diagonal_jaccard(tree: &IndexTree) -> DiagonalJaccard {
    let mut cells = Vec::new();
    for g in 2..=tree.g_star() {
        // (k, g - 1) must exist, so k is bounded by branch g - 1.
        for k in 2..=tree.k_max(g - 1) {
            let (Some(left), Some(down)) = (
                tree.leaf(Position::new(k - 1, g)),
                tree.leaf(Position::new(k, g - 1)),
            ) else {
                continue;
            };
            cells.push(JaccardCell {
                position: Position::new(k, g),
                jaccard: jaccard(left.value(), down.value()),
            });
        }
    }
    let defined: Vec<f64> = cells.iter().filter_map(|c| c.jaccard).collect();
    let mean = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    DiagonalJaccard {
        variant: tree.variant(),
        cells,
        mean,
    }
}

/// Queries picked at the 1st..100th size percentiles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuerySuite {
    pub queries: Vec<Query>,
    pub sizes: Vec<usize>,
    /// Set when fewer than 100 non-empty cores exist and all were taken.
    pub short: bool,
}

pub const SUITE_SIZE: usize = 100;

/// Sorts every non-empty core by size (ties by `(g, k)`) and takes the
/// nearest-rank pick for each percentile `1..=100`.
pub fn percentile_query_suite(table: &CoreSizeTable) -> QuerySuite {
    let mut cores: Vec<(usize, Position)> = table.iter().map(|(p, s)| (s, p)).collect();
    cores.sort_by_key(|&(s, p)| (s, p.g, p.k));
    let n = cores.len();
    let picks: Vec<usize> = if n < SUITE_SIZE {
        (0..n).collect()
    } else {
        (1..=SUITE_SIZE)
            .map(|p| (p * n).div_ceil(SUITE_SIZE) - 1)
            .collect()
    };
    QuerySuite {
        queries: picks
            .iter()
            .map(|&i| Query::new(cores[i].1.k, cores[i].1.g).expect("positions are positive"))
            .collect(),
        sizes: picks.iter().map(|&i| cores[i].0).collect(),
        short: n < SUITE_SIZE,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BenchOptions {
    /// Construction runs per variant; the median is reported.
    pub construction_runs: usize,
    /// Passes over the query suite; the median is reported.
    pub query_passes: usize,
    pub threads: usize,
    /// Also time the from-scratch peeling baseline over the suite.
    pub peeling: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            construction_runs: 3,
            query_passes: 3,
            threads: 1,
            peeling: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariantReport {
    pub variant: Variant,
    pub construction_seconds: f64,
    pub query_seconds: f64,
    pub stats: IndexStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub dataset: GraphStats,
    pub g_star: u32,
    pub k_star: u32,
    pub suite: QuerySuite,
    /// Total time to answer the whole suite by peeling from scratch.
    pub peeling_seconds: Option<f64>,
    pub variants: Vec<VariantReport>,
}

impl BenchReport {
    pub fn variant(&self, v: Variant) -> Option<&VariantReport> {
        self.variants.iter().find(|r| r.variant == v)
    }

    /// Peeling time over index time for `v`.
    pub fn speedup(&self, v: Variant) -> Option<f64> {
        let r = self.variant(v)?;
        Some(self.peeling_seconds? / r.query_seconds.max(f64::MIN_POSITIVE))
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Times construction and the percentile suite for each variant, plus the
/// peeling baseline.
pub fn bench(graph: &Hypergraph, variants: &[Variant], opts: BenchOptions) -> BenchReport {
    let build = BuildOptions {
        threads: opts.threads,
    };
    let table = coreness_tables_with(graph, opts.threads);
    let suite =
        percentile_query_suite(&crate::index::build_core_size_table(table.decompositions()));

    let mut reports = Vec::with_capacity(variants.len());
    for &variant in variants {
        let mut times = Vec::new();
        let mut tree = None;
        for _ in 0..opts.construction_runs.max(1) {
            let start = Instant::now();
            let t = IndexTree::build_with(graph, variant, build);
            times.push(secs(start.elapsed()));
            tree = Some(t);
        }
        let tree = tree.expect("at least one run");
        let mut passes = Vec::new();
        for _ in 0..opts.query_passes.max(1) {
            let start = Instant::now();
            for &q in &suite.queries {
                black_box(tree.query(q).len());
            }
            passes.push(secs(start.elapsed()));
        }
        log::info!("{variant}: built in {:.4}s", median(times.clone()));
        reports.push(VariantReport {
            variant,
            construction_seconds: median(times),
            query_seconds: median(passes),
            stats: storage_stats(&tree),
        });
    }

    let peeling_seconds = opts.peeling.then(|| {
        let start = Instant::now();
        for &q in &suite.queries {
            black_box(kg_core(graph, q.k(), q.g()).len());
        }
        secs(start.elapsed())
    });

    BenchReport {
        dataset: graph.stats(),
        g_star: table.g_star(),
        k_star: table.k_star(),
        suite,
        peeling_seconds,
        variants: reports,
    }
}

/// Seconds per call of `tree.query(q)`: the median of several timed batches,
/// each batch long enough to dwarf timer resolution.
pub fn time_query(tree: &IndexTree, q: Query, samples: usize) -> f64 {
    let start = Instant::now();
    black_box(tree.query(q).len());
    let once = secs(start.elapsed()).max(1e-9);
    let batch = ((2e-4 / once) as usize).clamp(1, 200_000);
    let mut xs = Vec::with_capacity(samples);
    for _ in 0..samples.max(1) {
        let start = Instant::now();
        for _ in 0..batch {
            black_box(tree.query(black_box(q)).len());
        }
        xs.push(secs(start.elapsed()) / batch as f64);
    }
    median(xs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalePoint {
    pub config: GenConfig,
    pub nodes: usize,
    pub edges: usize,
    /// Quartile queries with their core sizes.
    pub queries: Vec<(Query, usize)>,
    /// Median per-query seconds over the quartile queries, per variant.
    pub query_seconds: Vec<(Variant, f64)>,
    pub entries: Vec<(Variant, usize)>,
}

impl ScalePoint {
    pub fn seconds(&self, v: Variant) -> Option<f64> {
        self.query_seconds
            .iter()
            .find(|(x, _)| *x == v)
            .map(|&(_, s)| s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalabilityReport {
    pub seed: u64,
    pub points: Vec<ScalePoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalabilityOptions {
    pub sizes: Vec<usize>,
    pub edges_per_node: f64,
    pub cmin: usize,
    pub cmax: usize,
    pub seed: u64,
    pub samples: usize,
    pub threads: usize,
}

impl ScalabilityOptions {
    pub fn new(sizes: Vec<usize>, seed: u64) -> Self {
        Self {
            sizes,
            edges_per_node: 2.0,
            cmin: 2,
            cmax: 5,
            seed,
            samples: 9,
            threads: 1,
        }
    }
}

/// The non-empty cores whose sizes are closest to 1/4, 2/4 and 3/4 of the
/// node count (ties by `(g, k)`).
pub fn quartile_queries(table: &CoreSizeTable, node_count: usize) -> Vec<(Query, usize)> {
    (1..=3)
        .filter_map(|q| {
            let target = node_count * q / 4;
            table
                .iter()
                .min_by_key(|&(p, s)| (s.abs_diff(target), p.g, p.k))
                .map(|(p, s)| (Query::new(p.k, p.g).expect("positive"), s))
        })
        .collect()
}

/// Builds all variants on generated graphs of each size and times the
/// quartile queries.
pub fn scalability(opts: &ScalabilityOptions) -> ScalabilityReport {
    let mut points = Vec::new();
    for &n in &opts.sizes {
        let config = GenConfig {
            nodes: n,
            edges: (n as f64 * opts.edges_per_node).round() as usize,
            cmin: opts.cmin,
            cmax: opts.cmax,
            seed: opts.seed,
        };
        let graph = config.generate().expect("scalability config is valid");
        let table = coreness_tables_with(&graph, opts.threads);
        let sizes = crate::index::build_core_size_table(table.decompositions());
        let queries = quartile_queries(&sizes, graph.node_count());
        let mut query_seconds = Vec::new();
        let mut entries = Vec::new();
        for v in Variant::ALL {
            let tree = IndexTree::from_coreness(&graph, &table, v);
            let per_query: Vec<f64> = queries
                .iter()
                .map(|&(q, _)| time_query(&tree, q, opts.samples))
                .collect();
            query_seconds.push((v, median(per_query)));
            entries.push((v, tree.entry_count()));
        }
        log::info!("scalability: {n} nodes done");
        points.push(ScalePoint {
            config,
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            queries,
            query_seconds,
            entries,
        });
    }
    ScalabilityReport {
        seed: opts.seed,
        points,
    }
}
