//! Minimum connected spanning subhypergraphs and minimum spanning
//! hypertrees.
//!
//! With `f(E) = w(E)` on hyperedges and `+∞` elsewhere, the min-sum power
//!
//! ```text
//! f^{⊚1} = f,   f^{⊚k} = f ⊚ f^{⊚(k−1)}
//! ```
//!
//! under the intersecting covering product gives at `S` the lightest way to
//! grow a connected hypergraph with vertex set `S` one hyperedge at a time,
//! each new hyperedge meeting the vertices already covered. A connected
//! spanning subhypergraph of minimum weight has at most `n − 1` hyperedges.
//! Requiring the new hyperedge to meet the old vertices in exactly one
//! vertex grows hypertrees instead. The product is not associative, so the
//! nesting is fixed as written.

use crate::error::{Error, Result};
use crate::graph::Hypergraph;
use crate::mask::{GroundSet, Mask};
use crate::optimize::{opt_product, ExtendedWeight, ExtendedWeightFunction, OptMode};
use crate::products::ProductMode;

/// Vertex cap for [`mcsh`] and [`msth`].
pub const MAX_HYPER_VERTICES: usize = 20;

/// Largest hyperedge count accepted by [`hyper_brute`].
pub const BRUTE_MAX_HYPEREDGES: usize = 14;

/// Optimal weight and the chosen hyperedges (ascending indices into
/// [`Hypergraph::edges`]); `weight == None` when nothing spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperResult {
    pub weight: Option<u64>,
    pub edges: Vec<usize>,
}

impl HyperResult {
    fn infeasible() -> Self {
        HyperResult {
            weight: None,
            edges: Vec::new(),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whether the chosen hyperedges connect every vertex of `h`, and whether
/// the vertex–hyperedge incidence graph stays acyclic. A cycle there is
/// exactly a second path between two vertices.
fn structure(h: &Hypergraph, chosen: &[usize]) -> (bool, bool) {
    let n = h.n_vertices();
    let mut parent: Vec<usize> = (0..n + chosen.len()).collect();
    let mut acyclic = true;
    for (j, &e) in chosen.iter().enumerate() {
        for v in h.edges()[e].0.elements() {
            let (a, b) = (find(&mut parent, v - 1), find(&mut parent, n + j));
            if a == b {
                acyclic = false;
            } else {
                parent[a] = b;
            }
        }
    }
    let root = (n > 0).then(|| find(&mut parent, 0));
    let connected = (0..n).all(|v| Some(find(&mut parent, v)) == root);
    (connected, acyclic)
}

/// True iff the chosen hyperedges form a connected subhypergraph on all of
/// `V` in which every pair of vertices is joined by exactly one path.
pub fn is_tree(h: &Hypergraph, chosen: &[usize]) -> bool {
    let (connected, acyclic) = structure(h, chosen);
    connected && acyclic
}

fn covers(h: &Hypergraph, chosen: &[usize]) -> bool {
    chosen.iter().fold(Mask::EMPTY, |acc, &e| acc.union(h.edges()[e].0)) == h.vertices()
}

fn weight_of(h: &Hypergraph, chosen: &[usize]) -> u64 {
    chosen.iter().map(|&e| h.edges()[e].1).sum()
}

/// Exhaustive minimum over hyperedge subsets whose union is `V` and which
/// are connected (and trees when `require_tree`). Ties go to the subset
/// with the smallest index bitmask.
pub fn hyper_brute(h: &Hypergraph, require_tree: bool) -> Result<HyperResult> {
    let m = h.edges().len();
    if m > BRUTE_MAX_HYPEREDGES {
        return Err(Error::Guard {
            what: "hyperedges",
            value: m,
            max: BRUTE_MAX_HYPEREDGES,
        });
    }
    let mut best = HyperResult::infeasible();
    for bits in 0u32..1 << m {
        let chosen: Vec<usize> = (0..m).filter(|&i| bits >> i & 1 == 1).collect();
        if !covers(h, &chosen) {
            continue;
        }
        let (connected, acyclic) = structure(h, &chosen);
        if !connected || (require_tree && !acyclic) {
            continue;
        }
        let w = weight_of(h, &chosen);
        if best.weight.is_none_or(|b| w < b) {
            best = HyperResult {
                weight: Some(w),
                edges: chosen,
            };
        }
    }
    Ok(best)
}

/// Lightest hyperedge (lowest index on ties) for every vertex set.
fn lightest(h: &Hypergraph, ground: GroundSet) -> Vec<Option<usize>> {
    let mut best: Vec<Option<usize>> = vec![None; ground.size()];
    for (i, &(e, w)) in h.edges().iter().enumerate() {
        let slot = &mut best[e.index()];
        if slot.is_none_or(|j| w < h.edges()[j].1) {
            *slot = Some(i);
        }
    }
    best
}

struct Powers {
    f: ExtendedWeightFunction,
    lightest: Vec<Option<usize>>,
    /// `tables[k - 1]` is the `k`-th power.
    tables: Vec<ExtendedWeightFunction>,
}

fn powers(h: &Hypergraph, product: ProductMode, swapped: bool) -> Result<Powers> {
    let n = h.n_vertices();
    if n > MAX_HYPER_VERTICES {
        return Err(Error::GroundTooLarge {
            n,
            max: MAX_HYPER_VERTICES,
        });
    }
    let ground = GroundSet::new(n)?;
    let lightest = lightest(h, ground);
    let weights = lightest
        .iter()
        .map(|e| match e {
            Some(i) => ExtendedWeight::Finite(h.edges()[*i].1 as i64),
            None => ExtendedWeight::PosInf,
        })
        .collect();
    let f = ExtendedWeightFunction::with_inferred_bound(ground, weights)?;
    let mut tables = vec![f.clone()];
    for _ in 2..=n.saturating_sub(1).max(1) {
        let prev = tables.last().expect("nonempty");
        if prev.weights().iter().all(|w| !w.is_finite()) {
            break;
        }
        let next = if swapped {
            opt_product(prev, &f, OptMode::MinSum, product)?
        } else {
            opt_product(&f, prev, OptMode::MinSum, product)?
        };
        tables.push(next);
    }
    Ok(Powers { f, lightest, tables })
}

/// Peels one hyperedge `E` off a `k`-th power at `s`: the pair `(E, V)`
/// of the product with `f(E) + P_{k−1}(V) = P_k(s)`, scanning hyperedges
/// by index.
fn trace(p: &Powers, h: &Hypergraph, product: ProductMode, mut s: Mask, k: usize) -> Result<Vec<usize>> {
    let mut chosen = Vec::with_capacity(k);
    for level in (1..k).rev() {
        let goal = p.tables[level].get(s).finite().expect("finite entry");
        let prev = &p.tables[level - 1];
        let step = h.edges().iter().enumerate().find_map(|(i, &(e, w))| {
            if !e.is_subset_of(s) || p.lightest[e.index()] != Some(i) {
                return None;
            }
            let outside = s.difference(e);
            e.subsets()
                .filter(|x| match product {
                    ProductMode::ExactIntersection(l) => x.len() == l,
                    _ => !x.is_empty(),
                })
                .map(|x| outside.union(x))
                .find(|&v| prev.get(v).finite() == Some(goal - w as i64))
                .map(|v| (i, v))
        });
        let (i, v) = step.ok_or_else(|| Error::NoWitness {
            mask: s.bits(),
            target: goal.to_string(),
        })?;
        chosen.push(i);
        s = v;
    }
    let last = p.f.get(s).finite().and(p.lightest[s.index()]);
    chosen.push(last.expect("base entry is a hyperedge"));
    chosen.sort_unstable();
    Ok(chosen)
}

fn solve(h: &Hypergraph, product: ProductMode, swapped: bool) -> Result<HyperResult> {
    let p = powers(h, product, swapped)?;
    let full = h.vertices();
    let best = p
        .tables
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.get(full).finite().map(|w| (w, i + 1)))
        .min();
    let Some((weight, k)) = best else {
        return Ok(HyperResult::infeasible());
    };
    let edges = trace(&p, h, product, full, k)?;
    debug_assert_eq!(weight_of(h, &edges), weight as u64);
    Ok(HyperResult {
        weight: Some(weight as u64),
        edges,
    })
}

/// Minimum-weight connected spanning subhypergraph.
pub fn mcsh(h: &Hypergraph) -> Result<HyperResult> {
    solve(h, ProductMode::IntersectCover, false)
}

/// Minimum-weight spanning hypertree. The traced selection is checked with
/// [`is_tree`]; a failure is logged and reported as infeasible.
pub fn msth(h: &Hypergraph) -> Result<HyperResult> {
    let r = solve(h, ProductMode::ExactIntersection(1), false)?;
    if r.weight.is_some() && !is_tree(h, &r.edges) {
        log::warn!("spanning hypertree candidate {:?} is not a tree", r.edges);
        return Ok(HyperResult::infeasible());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hg(n: usize, edges: &[(&[usize], u64)]) -> Hypergraph {
        Hypergraph::new(
            n,
            edges.iter().map(|&(e, w)| (Mask::from_elements(e.iter().copied()), w)),
        )
        .unwrap()
    }

    /// Counts paths between `x` and `y` with distinct vertices and distinct
    /// hyperedges, consecutive vertices sharing the hyperedge between them.
    fn count_paths(h: &Hypergraph, chosen: &[usize], x: usize, y: usize) -> usize {
        fn walk(h: &Hypergraph, chosen: &[usize], at: usize, y: usize, seen: Mask, used: &mut Vec<bool>) -> usize {
            if at == y {
                return 1;
            }
            let mut total = 0;
            for (j, &e) in chosen.iter().enumerate() {
                let set = h.edges()[e].0;
                if used[j] || !set.contains(at) {
                    continue;
                }
                used[j] = true;
                for next in set.difference(seen).elements() {
                    total += walk(h, chosen, next, y, seen.union(Mask::from_elements([next])), used);
                }
                used[j] = false;
            }
            total
        }
        walk(
            h,
            chosen,
            x,
            y,
            Mask::from_elements([x]),
            &mut vec![false; chosen.len()],
        )
    }

    fn tree_by_paths(h: &Hypergraph, chosen: &[usize]) -> bool {
        let n = h.n_vertices();
        (1..=n).all(|x| (x + 1..=n).all(|y| count_paths(h, chosen, x, y) == 1))
    }

    #[test]
    fn is_tree_examples() {
        let h = hg(3, &[(&[1, 2], 1), (&[2, 3], 1), (&[1, 3], 1), (&[1, 2, 3], 4)]);
        assert!(is_tree(&h, &[0, 1]));
        assert!(!is_tree(&h, &[0, 1, 2]));
        assert!(is_tree(&h, &[3]));
        assert!(!is_tree(&h, &[0]));
        assert!(!is_tree(&h, &[0, 3]));
        for chosen in [&[0, 1][..], &[0, 1, 2], &[3], &[0], &[0, 3]] {
            assert_eq!(is_tree(&h, chosen), tree_by_paths(&h, chosen), "{chosen:?}");
        }
    }

    #[test]
    fn mcsh_examples() {
        let h = hg(3, &[(&[1, 2], 1), (&[2, 3], 1), (&[1, 2, 3], 3)]);
        let r = mcsh(&h).unwrap();
        assert_eq!(
            r,
            HyperResult {
                weight: Some(2),
                edges: vec![0, 1]
            }
        );
        assert_eq!(hyper_brute(&h, false).unwrap(), r);

        let h = hg(3, &[(&[1, 2], 1), (&[1, 2, 3], 1)]);
        let r = mcsh(&h).unwrap();
        assert_eq!(
            r,
            HyperResult {
                weight: Some(1),
                edges: vec![1]
            }
        );
        assert_eq!(hyper_brute(&h, false).unwrap(), r);

        let h = hg(1, &[(&[1], 2)]);
        let r = mcsh(&h).unwrap();
        assert_eq!(
            r,
            HyperResult {
                weight: Some(2),
                edges: vec![0]
            }
        );
        assert_eq!(hyper_brute(&h, false).unwrap(), r);
    }

    #[test]
    fn msth_examples() {
        let h = hg(3, &[(&[1, 2], 1), (&[2, 3], 1), (&[1, 3], 1)]);
        let r = msth(&h).unwrap();
        assert_eq!(r.weight, Some(2));
        assert!(is_tree(&h, &r.edges));
        assert_eq!(hyper_brute(&h, true).unwrap().weight, Some(2));

        let h = hg(3, &[(&[1, 2, 3], 4)]);
        assert_eq!(
            msth(&h).unwrap(),
            HyperResult {
                weight: Some(4),
                edges: vec![0]
            }
        );

        let h = hg(2, &[(&[1], 1), (&[2], 1)]);
        assert_eq!(msth(&h).unwrap(), HyperResult::infeasible());
        assert_eq!(mcsh(&h).unwrap(), HyperResult::infeasible());
        assert_eq!(hyper_brute(&h, true).unwrap(), HyperResult::infeasible());
    }

    #[test]
    fn brute_edge_cases() {
        assert_eq!(hyper_brute(&hg(3, &[]), false).unwrap(), HyperResult::infeasible());
        // A lone vertex with no hyperedges is not covered by any selection.
        assert_eq!(hyper_brute(&hg(1, &[]), false).unwrap(), HyperResult::infeasible());
        assert_eq!(mcsh(&hg(1, &[])).unwrap(), HyperResult::infeasible());
        let many: Vec<(&[usize], u64)> = vec![(&[1, 2], 1); 15];
        assert!(matches!(hyper_brute(&hg(2, &many), false), Err(Error::Guard { .. })));
        assert!(mcsh(&hg(21, &[])).is_err());
    }

    #[test]
    fn cycle_through_large_hyperedge() {
        // {1,2,3} with {1,2} would close a cycle; the tree must avoid it.
        let h = hg(4, &[(&[1, 2, 3], 2), (&[1, 2], 1), (&[3, 4], 1), (&[2, 4], 5)]);
        assert_eq!(mcsh(&h).unwrap().weight, Some(3));
        let t = msth(&h).unwrap();
        assert_eq!(t.weight, Some(3));
        assert!(is_tree(&h, &t.edges));
        assert_eq!(hyper_brute(&h, true).unwrap().weight, Some(3));
    }

    /// Prim's algorithm on the complete distance matrix of an ordinary graph.
    fn prim(n: usize, edges: &[(usize, usize, u64)]) -> Option<u64> {
        let mut w = vec![vec![u64::MAX; n]; n];
        for &(u, v, c) in edges {
            w[u - 1][v - 1] = w[u - 1][v - 1].min(c);
            w[v - 1][u - 1] = w[u - 1][v - 1];
        }
        let mut inside = vec![false; n];
        let mut dist = vec![u64::MAX; n];
        dist[0] = 0;
        let mut total = 0;
        for _ in 0..n {
            let v = (0..n).filter(|&v| !inside[v]).min_by_key(|&v| dist[v])?;
            if dist[v] == u64::MAX {
                return None;
            }
            inside[v] = true;
            total += dist[v];
            for u in 0..n {
                if !inside[u] {
                    dist[u] = dist[u].min(w[v][u]);
                }
            }
        }
        Some(total)
    }

    fn random_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (1usize..=7).prop_flat_map(|n| {
            proptest::collection::vec((1u32..1 << n, 1u64..=5), 0..=10)
                .prop_map(move |e| Hypergraph::new(n, e.into_iter().map(|(m, w)| (Mask(m), w))).unwrap())
        })
    }

    fn random_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize, u64)>)> {
        (2usize..=7).prop_flat_map(|n| {
            proptest::collection::vec((1..=n, 1..=n, 1u64..=9), 0..=12)
                .prop_map(move |e| (n, e.into_iter().filter(|(u, v, _)| u != v).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn solvers_match_brute_force(h in random_hypergraph()) {
            let c = mcsh(&h).unwrap();
            let t = msth(&h).unwrap();
            prop_assert_eq!(c.weight, hyper_brute(&h, false).unwrap().weight);
            prop_assert_eq!(t.weight, hyper_brute(&h, true).unwrap().weight);
            if let Some(w) = c.weight {
                prop_assert_eq!(weight_of(&h, &c.edges), w);
                prop_assert!(covers(&h, &c.edges) && structure(&h, &c.edges).0);
            }
            if let Some(w) = t.weight {
                prop_assert_eq!(weight_of(&h, &t.edges), w);
                prop_assert!(covers(&h, &t.edges));
                prop_assert!(tree_by_paths(&h, &t.edges));
                prop_assert!(c.weight.is_some_and(|c| c <= w));
            }
        }

        #[test]
        fn nesting_order_does_not_change_the_optimum(h in random_hypergraph()) {
            for product in [ProductMode::IntersectCover, ProductMode::ExactIntersection(1)] {
                prop_assert_eq!(
                    solve(&h, product, false).unwrap().weight,
                    solve(&h, product, true).unwrap().weight
                );
            }
        }

        #[test]
        fn ordinary_graphs_give_minimum_spanning_trees((n, edges) in random_graph()) {
            let h = Hypergraph::new(n, edges.iter().map(|&(u, v, w)| (Mask::from_elements([u, v]), w))).unwrap();
            prop_assert_eq!(msth(&h).unwrap().weight, prim(n, &edges));
        }
    }
}
