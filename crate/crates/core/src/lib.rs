//! Indexing and retrieval of `(k, g)`-cores in hypergraphs.
//!
//! A `(k, g)`-core is the largest node set in which every node has at least
//! `k` neighbours it shares at least `g` hyperedges with, counting only
//! neighbours inside the set. The crate peels cores directly, builds four
//! index layouts that answer core queries without peeling, and persists them.
//!
//! ```
//! use kgcore::{Hypergraph, IndexTree, Query, Variant};
//!
//! let graph: Hypergraph = "1 2 3\n1 2 3\n1 2 4\n3 4 5\n4 5 6\n4 5 6\n".parse().unwrap();
//! let tree = IndexTree::build(&graph, Variant::LseHvd);
//! let core = tree.query(Query::new(1, 3).unwrap());
//! let mut labels: Vec<&str> = core.iter().map(|&v| graph.label(v)).collect();
//! labels.sort();
//! assert_eq!(labels, ["1", "2", "4", "5"]);
//! assert_eq!(tree.entry_count(), 9);
//! ```

pub mod analytics;
pub mod error;
pub mod gen;
pub mod hypergraph;
pub mod index;
pub mod peeling;
pub mod persist;
pub mod query;
mod sets;

pub use analytics::{storage_stats, IndexStats};
pub use error::{FingerprintMismatch, GenError, LoadError, ParseError, QueryError};
pub use gen::GenConfig;
pub use hypergraph::{CooccurrenceIndex, Fingerprint, Hyperedge, Hypergraph, LabelDict, NodeId};
pub use index::{BuildOptions, CoreSizeTable, IndexTree, Position, Variant};
pub use peeling::{
    coreness_tables, enum_h, kg_core, CoreResult, CorenessTable, ShellDecomposition,
};
pub use persist::{load_index, save_index};
pub use query::{size_bounded_query, Query, SizeHit, SizeQuery};

// The guide's code blocks run as doc tests, one module per chapter so a
// failure points at its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/peeling.md")]
    mod peeling {}
    #[doc = include_str!("../../../book/src/index-variants.md")]
    mod index_variants {}
    #[doc = include_str!("../../../book/src/queries.md")]
    mod queries {}
    #[doc = include_str!("../../../book/src/persistence.md")]
    mod persistence {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
