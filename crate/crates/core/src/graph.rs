//! Graph and hypergraph containers used by the solvers. Vertices are
//! numbered `1..=n` throughout.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mask::{Mask, MAX_GROUND};

fn invalid(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

/// An undirected graph with positive integer edge weights. Parallel edges
/// are collapsed to the lightest one; edges are kept sorted as `(u, v, w)`
/// with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    adjacency: Vec<Vec<(usize, u64)>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let mut lightest = BTreeMap::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(invalid(format!("edge ({u}, {v}) outside vertices 1..={n}")));
            }
            if w == 0 {
                return Err(invalid(format!("edge ({u}, {v}) has weight 0")));
            }
            let key = (u.min(v), u.max(v));
            let entry = lightest.entry(key).or_insert(w);
            *entry = (*entry).min(w);
        }
        let edges: Vec<_> = lightest.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let mut adjacency = vec![Vec::new(); n + 1];
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(WeightedGraph { n, edges, adjacency })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Neighbours of `v` with the connecting edge weight.
    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adjacency[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.adjacency.get(u)?.iter().find(|&&(x, _)| x == v).map(|&(_, w)| w)
    }

    /// Largest edge weight, or 0 without edges.
    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }
}

/// An undirected simple graph on at most [`MAX_GROUND`] vertices, stored as
/// neighbourhood masks (vertex `v` is bit `v - 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    neighbors: Vec<Mask>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { n, max: MAX_GROUND });
        }
        let mut neighbors = vec![Mask::EMPTY; n];
        for (u, v) in edges {
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(invalid(format!("edge ({u}, {v}) outside vertices 1..={n}")));
            }
            neighbors[u - 1] = neighbors[u - 1].union(Mask::from_elements([v]));
            neighbors[v - 1] = neighbors[v - 1].union(Mask::from_elements([u]));
        }
        Ok(SimpleGraph { n, neighbors })
    }

    /// The cycle `1 − 2 − … − n − 1`.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).map(|v| (v, v % n + 1)).filter(|(u, v)| u != v))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))))
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> Mask {
        self.neighbors[v - 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u - 1].contains(v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|u| {
                self.neighbors(u)
                    .elements()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn is_independent(&self, s: Mask) -> bool {
        s.elements().all(|v| self.neighbors(v).intersection(s).is_empty())
    }

    pub fn is_clique(&self, s: Mask) -> bool {
        s.elements()
            .all(|v| s.difference(Mask::from_elements([v])).is_subset_of(self.neighbors(v)))
    }
}

/// A hypergraph with positive integer hyperedge weights. Hyperedges are
/// nonempty vertex masks; duplicates are allowed and kept in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<(Mask, u64)>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Mask, u64)>) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { n, max: MAX_GROUND });
        }
        let all = ((1u64 << n) - 1) as u32;
        let mut out = Vec::new();
        for (e, w) in edges {
            if e.is_empty() {
                return Err(invalid("empty hyperedge".into()));
            }
            if e.bits() & !all != 0 {
                return Err(invalid(format!("hyperedge {e} outside vertices 1..={n}")));
            }
            if w == 0 {
                return Err(invalid(format!("hyperedge {e} has weight 0")));
            }
            out.push((e, w));
        }
        Ok(Hypergraph { n, edges: out })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Mask, u64)] {
        &self.edges
    }

    pub fn vertices(&self) -> Mask {
        Mask(((1u64 << self.n) - 1) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_graph_collapses_parallel_edges() {
        let g = WeightedGraph::new(3, [(2, 1, 5), (1, 2, 3), (3, 2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2, 3), (2, 3, 1)]);
        assert_eq!(g.weight(2, 1), Some(3));
        assert_eq!(g.weight(1, 3), None);
        assert_eq!(g.max_weight(), 3);
        assert_eq!(g.neighbors(2).len(), 2);
    }

    #[test]
    fn weighted_graph_rejects_bad_edges() {
        assert!(WeightedGraph::new(3, [(1, 1, 1)]).is_err());
        assert!(WeightedGraph::new(3, [(1, 4, 1)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 1, 1)]).is_err());
        assert!(WeightedGraph::new(3, [(1, 2, 0)]).is_err());
    }

    #[test]
    fn simple_graph_predicates() {
        let c5 = SimpleGraph::cycle(5).unwrap();
        assert_eq!(c5.edges().len(), 5);
        assert!(c5.has_edge(5, 1));
        assert!(c5.is_independent(Mask::from_elements([1, 3])));
        assert!(!c5.is_independent(Mask::from_elements([1, 2])));
        assert!(c5.is_clique(Mask::from_elements([1, 2])));
        assert!(!c5.is_clique(Mask::from_elements([1, 2, 3])));
        assert!(c5.is_clique(Mask::EMPTY));
        let k4 = SimpleGraph::complete(4).unwrap();
        assert!(k4.is_clique(Mask::from_elements([1, 2, 3, 4])));
        assert_eq!(SimpleGraph::cycle(1).unwrap().edges().len(), 0);
        assert!(SimpleGraph::new(29, []).is_err());
    }

    #[test]
    fn hypergraph_validation() {
        let h = Hypergraph::new(3, [(Mask::from_elements([1, 2, 3]), 4)]).unwrap();
        assert_eq!(h.vertices(), Mask(0b111));
        assert!(Hypergraph::new(3, [(Mask::EMPTY, 1)]).is_err());
        assert!(Hypergraph::new(2, [(Mask::from_elements([3]), 1)]).is_err());
        assert!(Hypergraph::new(2, [(Mask::from_elements([1]), 0)]).is_err());
    }
}
