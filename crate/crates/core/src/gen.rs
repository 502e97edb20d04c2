//! Seeded random hypergraphs for scalability runs.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::GenError;
use crate::hypergraph::Hypergraph;

/// `edges` hyperedges over `nodes` candidate nodes, each with a cardinality
/// drawn uniformly from `cmin..=cmax` and members drawn uniformly without
/// replacement.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub nodes: usize,
    pub edges: usize,
    pub cmin: usize,
    pub cmax: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.cmin == 0 || self.cmax < self.cmin {
            return Err(GenError::BadCardinality {
                cmin: self.cmin,
                cmax: self.cmax,
            });
        }
        if self.cmax > self.nodes {
            return Err(GenError::CardinalityExceedsNodes {
                cmax: self.cmax,
                n: self.nodes,
            });
        }
        Ok(())
    }

    /// Edge lists as node numbers in `0..nodes`.
    pub fn edge_lists(&self) -> Result<Vec<Vec<usize>>, GenError> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.edges)
            .map(|_| {
                let card = rng.random_range(self.cmin..=self.cmax);
                index::sample(&mut rng, self.nodes, card).into_vec()
            })
            .collect())
    }

    /// The dataset text, one edge per line.
    pub fn render(&self) -> Result<String, GenError> {
        let mut out = String::new();
        for edge in self.edge_lists()? {
            let line: Vec<String> = edge.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn generate(&self) -> Result<Hypergraph, GenError> {
        let edges = self.edge_lists()?;
        Ok(Hypergraph::from_edges(edges.iter().map(|e| {
            e.iter().map(usize::to_string).collect::<Vec<_>>()
        })))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig {
            nodes: 10,
            edges: 5,
            cmin: 2,
            cmax: 3,
            seed: 7,
        };
        assert_eq!(cfg.render().unwrap(), cfg.render().unwrap());
        let other = GenConfig { seed: 8, ..cfg };
        assert_ne!(cfg.render().unwrap(), other.render().unwrap());
        let text = cfg.render().unwrap();
        assert_eq!(text.lines().count(), 5);
        for line in text.lines() {
            let n = line.split_whitespace().count();
            assert!((2..=3).contains(&n));
        }
    }

    #[test]
    fn singleton_edges_allowed() {
        let cfg = GenConfig {
            nodes: 4,
            edges: 20,
            cmin: 1,
            cmax: 1,
            seed: 1,
        };
        let g: Hypergraph = cfg.render().unwrap().parse().unwrap();
        assert_eq!(g.edge_count(), 20);
        assert!(g.edges().iter().all(|e| e.cardinality() == 1));
    }

    #[test]
    fn rejects_bad_configs() {
        let base = GenConfig {
            nodes: 3,
            edges: 1,
            cmin: 2,
            cmax: 4,
            seed: 0,
        };
        assert_eq!(
            base.validate(),
            Err(GenError::CardinalityExceedsNodes { cmax: 4, n: 3 })
        );
        assert!(GenConfig { cmin: 0, ..base }.validate().is_err());
        assert!(GenConfig {
            cmin: 3,
            cmax: 2,
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn generate_matches_render() {
        let cfg = GenConfig {
            nodes: 50,
            edges: 40,
            cmin: 2,
            cmax: 5,
            seed: 3,
        };
        let parsed: Hypergraph = cfg.render().unwrap().parse().unwrap();
        let built = cfg.generate().unwrap();
        assert_eq!(parsed.fingerprint(), built.fingerprint());
    }
}
