use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use kgcore::analytics::{
    bench, diagonal_jaccard, scalability, storage_stats, BenchOptions, ScalabilityOptions,
};
use kgcore::{
    kg_core, load_index, save_index, size_bounded_query, BuildOptions, GenConfig, Hypergraph,
    IndexTree, NodeId, Query, SizeQuery, Variant,
};

/// Build, persist and query (k, g)-core indexes over hypergraphs.
#[derive(Parser, Debug)]
#[command(name = "kgcore", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an index from a dataset and save it.
    Build(BuildArgs),
    /// Print the labels of one (k, g)-core from a saved index.
    Query(QueryArgs),
    /// Print `k g size` for every core whose size is in [lb, ub].
    SizeQuery(SizeQueryArgs),
    /// Compute one (k, g)-core by peeling, without an index.
    Peel(PeelArgs),
    /// Print storage statistics of a saved index.
    Stats(StatsArgs),
    /// Time construction and queries on a dataset or on generated graphs.
    Bench(BenchArgs),
    /// Write a seeded random dataset.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    g: u32,
    /// Write labels here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SizeQueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    lb: usize,
    #[arg(long)]
    ub: usize,
}

#[derive(Args, Debug)]
pub struct PeelArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    g: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    index: PathBuf,
    /// Print the statistics as JSON.
    #[arg(long)]
    json: bool,
    /// Also report diagonal leaf overlap for this index.
    #[arg(long)]
    jaccard: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Dataset to benchmark. Omit when using --synthetic.
    #[arg(
        long,
        required_unless_present = "synthetic",
        conflicts_with = "synthetic"
    )]
    input: Option<PathBuf>,
    /// `all` or a comma-separated list of variant names.
    #[arg(long, default_value = "all", value_parser = parse_variants)]
    variants: VariantList,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Comma-separated node counts for the scalability sweep.
    #[arg(long, value_delimiter = ',', requires = "seed")]
    synthetic: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Skip the from-scratch peeling baseline.
    #[arg(long)]
    no_peeling: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, default_value_t = 2)]
    cmin: usize,
    #[arg(long, default_value_t = 5)]
    cmax: usize,
    #[arg(long)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct VariantList(Vec<Variant>);

fn parse_variants(s: &str) -> Result<VariantList, String> {
    if s == "all" {
        return Ok(VariantList(Variant::ALL.to_vec()));
    }
    s.split(',')
        .map(|v| v.trim().parse())
        .collect::<Result<Vec<_>, _>>()
        .map(VariantList)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Query(a) => cmd_query(a),
        Command::SizeQuery(a) => cmd_size_query(a),
        Command::Peel(a) => cmd_peel(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Hypergraph::parse(BufReader::new(file))
        .with_context(|| format!("cannot parse {}", path.display()))
}

fn read_index(path: &Path) -> Result<IndexTree> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    load_index(BufReader::new(file)).with_context(|| format!("cannot load {}", path.display()))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_labels(
    out: &mut dyn Write,
    label: impl Fn(NodeId) -> String,
    nodes: &[NodeId],
) -> Result<()> {
    for &v in nodes {
        writeln!(out, "{}", label(v))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let graph = read_graph(&a.input)?;
    let tree = IndexTree::build_with(&graph, a.variant, BuildOptions { threads: a.threads });
    let file =
        File::create(&a.output).with_context(|| format!("cannot create {}", a.output.display()))?;
    save_index(&tree, file).with_context(|| format!("cannot write {}", a.output.display()))?;
    let s = storage_stats(&tree);
    println!(
        "variant={} nodes={} g_star={} entries={} leaves={} empty_leaves={} aux_nodes={} approx_bytes={}",
        s.variant,
        tree.node_count(),
        tree.g_star(),
        s.total_entries,
        s.leaf_count,
        s.empty_leaf_count,
        s.aux_count,
        s.approx_bytes
    );
    Ok(())
}

fn cmd_query(a: QueryArgs) -> Result<()> {
    let tree = read_index(&a.index)?;
    let q = Query::new(a.k, a.g)?;
    let core = tree.query(q);
    log::info!("({}, {})-core has {} nodes", a.k, a.g, core.len());
    let mut out = sink(a.output.as_deref())?;
    write_labels(&mut out, |v| tree.label(v).to_owned(), &core)
}

fn cmd_size_query(a: SizeQueryArgs) -> Result<()> {
    let tree = read_index(&a.index)?;
    let sq = SizeQuery::new(a.lb, a.ub)?;
    let mut out = sink(None)?;
    for hit in size_bounded_query(&tree, sq) {
        writeln!(out, "{} {} {}", hit.k, hit.g, hit.size)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_peel(a: PeelArgs) -> Result<()> {
    let graph = read_graph(&a.input)?;
    let core = kg_core(&graph, a.k, a.g);
    let mut out = sink(a.output.as_deref())?;
    write_labels(&mut out, |v| graph.label(v).to_owned(), &core.members)
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let tree = read_index(&a.index)?;
    let s = storage_stats(&tree);
    let jac = a.jaccard.then(|| diagonal_jaccard(&tree));
    let mut out = sink(None)?;
    if a.json {
        let mut v = serde_json::to_value(&s)?;
        if let Some(j) = &jac {
            v["diagonal_jaccard"] = serde_json::to_value(j)?;
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        writeln!(out, "variant          {}", s.variant)?;
        writeln!(out, "nodes            {}", tree.node_count())?;
        writeln!(out, "g_star           {}", tree.g_star())?;
        writeln!(out, "total_entries    {}", s.total_entries)?;
        writeln!(out, "leaf_entries     {}", s.leaf_entries)?;
        writeln!(out, "aux_entries      {}", s.aux_entries)?;
        writeln!(out, "approx_bytes     {}", s.approx_bytes)?;
        writeln!(out, "leaf_count       {}", s.leaf_count)?;
        writeln!(out, "empty_leaf_count {}", s.empty_leaf_count)?;
        writeln!(out, "aux_count        {}", s.aux_count)?;
        writeln!(out, "mean_aux_depth   {:.4}", s.mean_aux_depth)?;
        writeln!(out, "mean_aux_size    {:.4}", s.mean_aux_size)?;
        if let Some(j) = &jac {
            match j.mean {
                Some(m) => writeln!(out, "diagonal_jaccard {m:.4} over {} cells", j.cells.len())?,
                None => writeln!(out, "diagonal_jaccard n/a")?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let json = if let Some(sizes) = a.synthetic {
        let seed = a.seed.context("--synthetic requires --seed")?;
        let mut opts = ScalabilityOptions::new(sizes, seed);
        opts.threads = a.threads;
        let report = scalability(&opts);
        for p in &report.points {
            let times: Vec<String> = p
                .query_seconds
                .iter()
                .map(|(v, s)| format!("{v}={:.3}us", s * 1e6))
                .collect();
            println!("nodes={} edges={} {}", p.nodes, p.edges, times.join(" "));
        }
        serde_json::to_string_pretty(&report)?
    } else {
        let input = a.input.context("--input is required")?;
        let graph = read_graph(&input)?;
        let opts = BenchOptions {
            construction_runs: a.runs,
            query_passes: a.runs,
            threads: a.threads,
            peeling: !a.no_peeling,
        };
        let report = bench(&graph, &a.variants.0, opts);
        if let Some(p) = report.peeling_seconds {
            println!("peeling suite={} total={p:.6}s", report.suite.queries.len());
        }
        for r in &report.variants {
            let speedup = report
                .speedup(r.variant)
                .map_or(String::new(), |x| format!(" speedup={x:.1}x"));
            println!(
                "{} build={:.6}s queries={:.6}s entries={}{speedup}",
                r.variant, r.construction_seconds, r.query_seconds, r.stats.total_entries
            );
        }
        serde_json::to_string_pretty(&report)?
    };
    if let Some(path) = a.json {
        std::fs::write(&path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let cfg = GenConfig {
        nodes: a.nodes,
        edges: a.edges,
        cmin: a.cmin,
        cmax: a.cmax,
        seed: a.seed,
    };
    let text = cfg.render()?;
    let mut out = sink(a.output.as_deref())?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}
