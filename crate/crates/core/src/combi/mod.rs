//! Counting and packing through convolution powers, plus the branching
//! expectation and color-coding pathway solvers.
//!
//! For a set function `f`, the `k`-fold subset convolution `f^{*k}(S)`
//! counts ordered `k`-tuples of disjoint sets covering `S` with every part
//! accepted by `f`; the `k`-fold packing power drops the covering
//! requirement.

mod branching;
mod pathway;

pub use branching::{branching_expectation, BranchingSpec};
pub use pathway::{
    pathway_brute, pathway_search, pathway_trial, trial_coloring, trial_count, PathwayInstance, PathwayResult,
    MAX_PATHWAY_K,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::mask::{GroundSet, Mask};
use crate::products::{self, convolve_power, ProductMode};
use crate::ring::{BigIntRing, Ring};
use crate::setfn::SetFunction;

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

/// `f^{*k}(N)`: ordered `k`-tuples of disjoint sets covering the ground set,
/// weighted by the product of their `f` values.
pub fn count_partitions<R: Ring>(ring: &R, f: &SetFunction<R::Elem>, k: usize) -> Result<R::Elem> {
    let p = convolve_power(ring, f, k, ProductMode::Subset)?;
    Ok(p.get(f.ground().full()).clone())
}

/// Indicator of the independent sets of `graph`, `∅` included.
pub fn independent_sets(graph: &SimpleGraph) -> Result<SetFunction<BigInt>> {
    let ground = GroundSet::new(graph.n_vertices())?;
    Ok(SetFunction::from_fn(ground, |s| indicator(graph.is_independent(s))))
}

fn indicator(b: bool) -> BigInt {
    if b {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// Proper colorings with `k` labelled colors; color classes may be empty.
pub fn count_proper_colorings(graph: &SimpleGraph, k: usize) -> Result<BigInt> {
    check_k(k)?;
    count_partitions(&BigIntRing, &independent_sets(graph)?, k)
}

/// Smallest `k` with a proper `k`-coloring (0 for the empty graph).
pub fn chromatic_number(graph: &SimpleGraph) -> Result<usize> {
    let f = independent_sets(graph)?;
    let full = f.ground().full();
    if full.is_empty() {
        return Ok(0);
    }
    let mut power = f.clone();
    for k in 1..=graph.n_vertices() {
        if !power.get(full).is_zero() {
            return Ok(k);
        }
        power = products::subset_convolve(&BigIntRing, &power, &f)?;
    }
    unreachable!("n colors always suffice")
}

/// Counts of `k`-colorings of every induced subgraph, with the
/// inclusion-maximal colorable vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorableSubgraphs {
    pub counts: SetFunction<BigInt>,
    /// Ascending by mask value.
    pub maximal: Vec<Mask>,
}

pub fn colorable_subgraphs(graph: &SimpleGraph, k: usize) -> Result<ColorableSubgraphs> {
    check_k(k)?;
    let counts = convolve_power(&BigIntRing, &independent_sets(graph)?, k, ProductMode::Subset)?;
    let full = counts.ground().full();
    // Colorability is closed downward, so a positive set is maximal exactly
    // when no single vertex can be added.
    let maximal = counts
        .iter()
        .filter(|(s, c)| {
            !c.is_zero()
                && full
                    .difference(*s)
                    .elements()
                    .all(|v| counts.get(s.union(Mask::from_elements([v]))).is_zero())
        })
        .map(|(s, _)| s)
        .collect();
    Ok(ColorableSubgraphs { counts, maximal })
}

/// Number of ordered `k`-tuples of disjoint cliques of size at least `ell`,
/// and whether one exists.
pub fn clique_packing(graph: &SimpleGraph, k: usize, ell: usize) -> Result<(bool, BigInt)> {
    check_k(k)?;
    if ell == 0 {
        return Err(Error::InvalidArgument("clique size must be at least 1".into()));
    }
    let ground = GroundSet::new(graph.n_vertices())?;
    let f = SetFunction::from_fn(ground, |s| indicator(s.len() >= ell && graph.is_clique(s)));
    let p = convolve_power(&BigIntRing, &f, k, ProductMode::Pack)?;
    let count = p.get(ground.full()).clone();
    Ok((!count.is_zero(), count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CheckedWord;
    use proptest::prelude::*;

    /// Enumerates all `k^n` assignments.
    fn brute_colorings(g: &SimpleGraph, k: usize) -> u64 {
        let n = g.n_vertices();
        let mut color = vec![0usize; n];
        let mut count = 0;
        loop {
            if g.edges().iter().all(|&(u, v)| color[u - 1] != color[v - 1]) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                color[i] += 1;
                if color[i] < k {
                    break;
                }
                color[i] = 0;
                i += 1;
            }
        }
    }

    fn path3() -> SimpleGraph {
        SimpleGraph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn partition_examples() {
        let all = SetFunction::constant(GroundSet::new(2).unwrap(), 1i64);
        assert_eq!(count_partitions(&CheckedWord, &all, 2).unwrap(), 4);
        for n in 0..4 {
            let d = SetFunction::delta_empty(GroundSet::new(n).unwrap(), 1i64, 0);
            for k in 1..4 {
                assert_eq!(count_partitions(&CheckedWord, &d, k).unwrap(), (n == 0) as i64);
            }
        }
        let tri = SimpleGraph::complete(3).unwrap();
        let f = independent_sets(&tri).unwrap();
        assert_eq!(count_partitions(&BigIntRing, &f, 3).unwrap(), BigInt::from(6));
        assert!(count_partitions(&BigIntRing, &f, 0).is_err());
    }

    #[test]
    fn coloring_examples() {
        let tri = SimpleGraph::complete(3).unwrap();
        assert_eq!(count_proper_colorings(&tri, 3).unwrap(), BigInt::from(6));
        assert_eq!(brute_colorings(&tri, 3), 6);
        let c5 = SimpleGraph::cycle(5).unwrap();
        assert_eq!(count_proper_colorings(&c5, 3).unwrap(), BigInt::from(30));
        assert_eq!(brute_colorings(&c5, 3), 30);
        let empty = SimpleGraph::new(4, []).unwrap();
        assert_eq!(count_proper_colorings(&empty, 3).unwrap(), BigInt::from(81));
        assert_eq!(
            count_proper_colorings(&SimpleGraph::new(0, []).unwrap(), 2).unwrap(),
            BigInt::one()
        );
        assert!(count_proper_colorings(&tri, 0).is_err());
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&SimpleGraph::new(0, []).unwrap()).unwrap(), 0);
        assert_eq!(chromatic_number(&SimpleGraph::new(3, []).unwrap()).unwrap(), 1);
        assert_eq!(chromatic_number(&path3()).unwrap(), 2);
        assert_eq!(chromatic_number(&SimpleGraph::cycle(5).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number(&SimpleGraph::complete(5).unwrap()).unwrap(), 5);
    }

    #[test]
    fn colorable_subgraph_examples() {
        let tri = SimpleGraph::complete(3).unwrap();
        let r = colorable_subgraphs(&tri, 2).unwrap();
        assert_eq!(r.maximal, vec![Mask(0b011), Mask(0b101), Mask(0b110)]);
        assert!(r.counts.get(Mask(0b111)).is_zero());
        assert_eq!(r.counts.get(Mask(0b011)), &BigInt::from(2));

        let c5 = SimpleGraph::cycle(5).unwrap();
        let r = colorable_subgraphs(&c5, 5).unwrap();
        assert_eq!(r.maximal, vec![Mask(0b11111)]);

        let empty = SimpleGraph::new(4, []).unwrap();
        let r = colorable_subgraphs(&empty, 1).unwrap();
        assert_eq!(r.maximal, vec![Mask(0b1111)]);
        assert_eq!(r.counts.get(Mask(0b1111)), &BigInt::one());
    }

    #[test]
    fn clique_packing_examples() {
        let tri = SimpleGraph::complete(3).unwrap();
        assert!(clique_packing(&tri, 1, 3).unwrap().0);
        assert!(!clique_packing(&tri, 2, 2).unwrap().0);
        let (ok, count) = clique_packing(&path3(), 2, 1).unwrap();
        assert!(ok);
        // Ordered pairs of disjoint nonempty cliques in a − b − c: six pairs
        // of distinct singletons, and {a,b} or {b,c} against the far end.
        assert_eq!(count, BigInt::from(10));
        assert!(clique_packing(&tri, 1, 0).is_err());
    }

    fn random_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
                let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
                SimpleGraph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn colorings_match_enumeration(g in random_graph(7), k in 1usize..=4) {
            prop_assert_eq!(count_proper_colorings(&g, k).unwrap(), BigInt::from(brute_colorings(&g, k)));
        }

        #[test]
        fn isolated_vertex_multiplies_by_k(g in random_graph(7), k in 1usize..=4) {
            let bigger = SimpleGraph::new(g.n_vertices() + 1, g.edges()).unwrap();
            prop_assert_eq!(
                count_proper_colorings(&bigger, k).unwrap(),
                count_proper_colorings(&g, k).unwrap() * BigInt::from(k)
            );
        }

        #[test]
        fn colorability_is_closed_downward(g in random_graph(7), k in 1usize..=3) {
            let r = colorable_subgraphs(&g, k).unwrap();
            for (s, c) in r.counts.iter() {
                if !c.is_zero() {
                    for t in s.subsets() {
                        prop_assert!(!r.counts.get(t).is_zero());
                    }
                }
            }
            for m in &r.maximal {
                prop_assert!(!r.counts.get(*m).is_zero());
            }
        }
    }
}
