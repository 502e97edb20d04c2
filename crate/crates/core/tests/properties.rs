mod common;

use std::collections::BTreeSet;

use common::{intersect, is_subset, sorted, Pairs};
use kgcore::index::{build_lse_h, build_lse_hv, build_lse_hvd, build_naive};
use kgcore::peeling::Peeler;
use kgcore::query::size_bounded_query_peeling;
use kgcore::{
    coreness_tables, enum_h, kg_core, load_index, save_index, size_bounded_query, BuildOptions,
    CooccurrenceIndex, Hypergraph, IndexTree, NodeId, Position, Query, SizeQuery, Variant,
};
use proptest::prelude::*;

fn graph_text() -> impl Strategy<Value = String> {
    (2usize..14).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=4), 0..32).prop_map(|edges| {
            edges
                .iter()
                .map(|e| {
                    e.iter()
                        .map(|v| format!("n{v}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                        + "\n"
                })
                .collect()
        })
    })
}

fn graph() -> impl Strategy<Value = Hypergraph> {
    graph_text().prop_map(|t| t.parse().unwrap())
}

fn grid(p: &Pairs) -> impl Iterator<Item = (u32, u32)> {
    let (ks, gs) = (p.k_star() + 1, p.max() + 1);
    (1..=gs).flat_map(move |g| (1..=ks).map(move |k| (k, g)))
}

fn save(tree: &IndexTree) -> Vec<u8> {
    let mut buf = Vec::new();
    save_index(tree, &mut buf).unwrap();
    buf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cooccurrence_matches_edge_counts(g in graph(), mask in prop::collection::vec(any::<bool>(), 14)) {
        let pairs = Pairs::of(&g);
        let alive: Vec<bool> = (0..g.node_count()).map(|i| mask[i]).collect();
        for v in g.nodes().filter(|v| alive[v.index()]) {
            let map = g.cooccurrence(v, &alive);
            for w in g.nodes() {
                let expected = if alive[w.index()] { pairs.get(v, w) } else { 0 };
                prop_assert_eq!(map.get(w), expected);
            }
            prop_assert_eq!(map.get(v), 0);
        }
    }

    #[test]
    fn cooccurrence_index_is_symmetric(g in graph()) {
        let co = CooccurrenceIndex::build(&g);
        let pairs = Pairs::of(&g);
        for v in g.nodes() {
            for (w, c) in co.row(v) {
                prop_assert_eq!(c, pairs.get(v, w));
                prop_assert_eq!(c, pairs.get(w, v));
            }
            let nonzero = g.nodes().filter(|&w| pairs.get(v, w) > 0).count();
            prop_assert_eq!(co.neighbour_count(v), nonzero);
        }
        prop_assert_eq!(co.max_count(), pairs.max());
        prop_assert_eq!(CooccurrenceIndex::build_parallel(&g).max_count(), pairs.max());
    }

    #[test]
    fn parse_write_round_trip(text in graph_text()) {
        let g: Hypergraph = text.parse().unwrap();
        let mut buf = Vec::new();
        g.write_lines(&mut buf).unwrap();
        let again = Hypergraph::parse(&buf[..]).unwrap();
        prop_assert_eq!(again.fingerprint(), g.fingerprint());
        prop_assert_eq!(again.edge_count(), g.edge_count());
        for v in g.nodes() {
            prop_assert_eq!(again.id(g.label(v)), Some(v));
        }
    }

    #[test]
    fn peeling_matches_oracle(g in graph()) {
        let pairs = Pairs::of(&g);
        for (k, gg) in grid(&pairs) {
            prop_assert_eq!(kg_core(&g, k, gg).members, pairs.core(k, gg), "({}, {})", k, gg);
        }
    }

    #[test]
    fn cores_are_nested(g in graph()) {
        let pairs = Pairs::of(&g);
        for (k, gg) in grid(&pairs) {
            let c = kg_core(&g, k, gg).members;
            prop_assert!(is_subset(&kg_core(&g, k + 1, gg).members, &c));
            prop_assert!(is_subset(&kg_core(&g, k, gg + 1).members, &c));
        }
    }

    #[test]
    fn peeling_order_is_irrelevant(g in graph(), seed in any::<u64>()) {
        let co = CooccurrenceIndex::build(&g);
        let peeler = Peeler::new(&co);
        let mut order: Vec<NodeId> = g.nodes().collect();
        let n = order.len();
        for i in (1..n).rev() {
            order.swap(i, (seed.rotate_left(i as u32) as usize) % (i + 1));
        }
        for (k, gg) in [(1, 1), (2, 1), (2, 2), (3, 1), (1, 2)] {
            prop_assert_eq!(peeler.core_in_order(k, gg, &order), peeler.core(k, gg));
        }
    }

    #[test]
    fn shells_match_oracle_coreness(g in graph()) {
        let pairs = Pairs::of(&g);
        for gg in 1..=pairs.max() + 1 {
            let shells = enum_h(&g, gg);
            for v in g.nodes() {
                let k = pairs.g_coreness(v, gg);
                let found = (1..=shells.k_max()).find(|&s| shells.shell(s).contains(&v)).unwrap_or(0);
                prop_assert_eq!(found, k, "node {} at g = {}", v, gg);
            }
            for k in 1..=shells.k_max() + 1 {
                prop_assert_eq!(shells.core(k), pairs.core(k, gg));
            }
        }
    }

    #[test]
    fn coreness_is_monotone(g in graph()) {
        let table = coreness_tables(&g);
        for v in g.nodes() {
            for gg in 1..=table.g_star() {
                prop_assert!(table.g_coreness(v, gg + 1) <= table.g_coreness(v, gg));
            }
            for k in 1..=table.k_star() {
                prop_assert!(table.k_coreness(v, k + 1) <= table.k_coreness(v, k));
            }
        }
    }

    #[test]
    fn leaf_values_follow_variant(g in graph()) {
        let pairs = Pairs::of(&g);
        let table = coreness_tables(&g);
        let naive = build_naive(&g);
        let h = build_lse_h(&g);
        let hv = build_lse_hv(&g);
        for (pos, leaf) in naive.positions() {
            prop_assert_eq!(leaf.value(), &pairs.core(pos.k, pos.g)[..]);
        }
        for (pos, leaf) in h.positions() {
            let shell: Vec<NodeId> = g.nodes().filter(|&v| pairs.g_coreness(v, pos.g) == pos.k).collect();
            prop_assert_eq!(leaf.value(), &shell[..]);
        }
        for (pos, leaf) in hv.positions() {
            let exact: Vec<NodeId> = g
                .nodes()
                .filter(|&v| table.g_coreness(v, pos.g) == pos.k && table.k_coreness(v, pos.k) == pos.g)
                .collect();
            prop_assert_eq!(leaf.value(), &exact[..]);
        }
        for t in [&naive, &h, &hv] {
            for gg in 1..=t.g_star() {
                prop_assert_eq!(t.k_max(gg), table.k_star_for(gg));
            }
        }
    }

    #[test]
    fn aux_nodes_respect_placement(g in graph()) {
        let hv = build_lse_hv(&g);
        let hvd = build_lse_hvd(&g);
        let pairs = Pairs::of(&g);
        for (pos, aux) in hvd.aux_nodes() {
            prop_assert!(pos.k >= 2 && pos.g >= 2);
            let own = hvd.leaf(pos).unwrap().value();
            let mut seen = BTreeSet::new();
            for (d, nodes) in aux.depths() {
                prop_assert!(d >= 1 && !nodes.is_empty());
                // No node sits in both the leaf and its aux node.
                prop_assert!(intersect(nodes, own).is_empty());
                // No node repeats across depths.
                for v in nodes {
                    prop_assert!(seen.insert(*v));
                }
                let left = hv.leaf(Position::new(pos.k, pos.g - 1)).map_or(&[][..], |l| l.value());
                let down = hv.leaf(Position::new(pos.k - 1, pos.g)).map_or(&[][..], |l| l.value());
                if d == 1 {
                    prop_assert!(is_subset(nodes, &intersect(left, down)));
                }
                // Aux nodes are exactly those the start position must skip.
                prop_assert!(intersect(nodes, &pairs.core(pos.k, pos.g)).is_empty());
                prop_assert!(is_subset(nodes, &pairs.core(pos.k - 1, pos.g)));
                prop_assert!(is_subset(nodes, &pairs.core(pos.k, pos.g - 1)));
            }
        }
    }

    #[test]
    fn entry_counts_shrink_and_are_conserved(g in graph()) {
        let counts: Vec<usize> = Variant::ALL.iter().map(|&v| IndexTree::build(&g, v).entry_count()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{:?}", counts);
        let hv = build_lse_hv(&g);
        let hvd = build_lse_hvd(&g);
        let aux: usize = hvd.aux_nodes().map(|(_, a)| a.entry_count()).sum();
        // Each depth-1 node replaces two leaf entries by one aux entry.
        prop_assert_eq!(hv.entry_count() - hvd.entry_count(), aux);
        prop_assert!(hvd.aux_nodes().all(|(_, a)| a.depths().all(|(d, _)| d == 1)));
        let stored = |t: &IndexTree| {
            let mut s: BTreeSet<NodeId> = t.positions().flat_map(|(_, l)| l.value().to_vec()).collect();
            s.extend(t.aux_nodes().flat_map(|(_, a)| a.depths().flat_map(|(_, n)| n.to_vec()).collect::<Vec<_>>()));
            s
        };
        prop_assert_eq!(stored(&hv), stored(&hvd));
    }

    #[test]
    fn every_variant_answers_like_the_oracle(g in graph()) {
        let pairs = Pairs::of(&g);
        let trees: Vec<IndexTree> = Variant::ALL.iter().map(|&v| IndexTree::build(&g, v)).collect();
        for (k, gg) in grid(&pairs) {
            let expected = pairs.core(k, gg);
            let q = Query::new(k, gg).unwrap();
            for t in &trees {
                prop_assert_eq!(&t.query(q)[..], &expected[..], "{} ({}, {})", t.variant(), k, gg);
            }
        }
    }

    #[test]
    fn size_windows_agree(g in graph(), lb in 0usize..16, width in 0usize..16) {
        let sq = SizeQuery::new(lb, lb + width).unwrap();
        let tree = IndexTree::build(&g, Variant::LseHvd);
        let fast = size_bounded_query(&tree, sq);
        prop_assert_eq!(&fast, &size_bounded_query_peeling(&g, sq));
        for hit in &fast {
            prop_assert_eq!(hit.size, kg_core(&g, hit.k, hit.g).len());
            prop_assert!(sq.contains(hit.size));
        }
    }

    #[test]
    fn saved_trees_reload_identically(g in graph()) {
        for v in Variant::ALL {
            let tree = IndexTree::build(&g, v);
            let bytes = save(&tree);
            let loaded = load_index(&bytes[..]).unwrap();
            prop_assert_eq!(&loaded, &tree);
            prop_assert_eq!(save(&loaded), bytes);
            prop_assert!(loaded.verify_source(&g).is_ok());
        }
    }

    #[test]
    fn threaded_build_is_deterministic(g in graph()) {
        for v in Variant::ALL {
            let seq = IndexTree::build(&g, v);
            let par = IndexTree::build_with(&g, v, BuildOptions { threads: 3 });
            prop_assert_eq!(par, seq);
        }
    }
}

#[test]
fn random_graphs_keep_sorted_members() {
    for seed in 0..20 {
        let g = common::random_graph(seed, 40, 80);
        for (k, gg) in [(1, 1), (3, 1), (2, 2)] {
            let m = kg_core(&g, k, gg).members;
            prop_assert_sorted(&m);
        }
    }
}

fn prop_assert_sorted(m: &[NodeId]) {
    assert_eq!(sorted(m.to_vec()), m);
}
