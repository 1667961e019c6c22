//! Minimum Steiner trees through the Dreyfus–Wagner recursion.
//!
//! For terminals `K = {t_1, …, t_k}` and a vertex `q`, `W[X][q]` is the
//! weight of a lightest tree connecting `X ∪ {q}` for `X ⊆ K`. With `d` the
//! shortest-path metric,
//!
//! ```text
//! W[X][q] = min_p  d(p, q) + g_p(X),
//! g_p(X)  = min_{∅ ⊂ D ⊂ X}  W[D][p] + W[X∖D][p],
//! ```
//!
//! and `W(K) = W[K∖{t_k}][t_k]`. The classic evaluation enumerates every
//! split; the fast one evaluates `g_p` level by level as a min-sum covering
//! product of the band-limited table `f_p`, which is valid because `W` is
//! monotone under inclusion.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::mask::{iterate_subsets, GroundSet, Mask, MAX_GROUND};
use crate::optimize::{opt_product, opt_witness, ExtendedWeight, ExtendedWeightFunction, OptMode};
use crate::par;
use crate::products::ProductMode;

/// Largest edge count accepted by [`steiner_brute`].
pub const BRUTE_MAX_EDGES: usize = 16;

const INF: u64 = u64::MAX;

/// A Steiner problem: a graph and distinct terminals.
#[derive(Debug, Clone)]
pub struct SteinerInstance {
    graph: WeightedGraph,
    terminals: Vec<usize>,
}

impl SteinerInstance {
    pub fn new(graph: WeightedGraph, terminals: Vec<usize>) -> Result<Self> {
        if terminals.len() > MAX_GROUND {
            return Err(Error::GroundTooLarge {
                n: terminals.len(),
                max: MAX_GROUND,
            });
        }
        let mut seen = BTreeSet::new();
        for &t in &terminals {
            if t == 0 || t > graph.n_vertices() {
                return Err(Error::InvalidArgument(format!(
                    "terminal {t} outside vertices 1..={}",
                    graph.n_vertices()
                )));
            }
            if !seen.insert(t) {
                return Err(Error::InvalidArgument(format!("terminal {t} listed twice")));
            }
        }
        Ok(SteinerInstance { graph, terminals })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    fn k(&self) -> usize {
        self.terminals.len()
    }
}

/// An optimal weight with a tree attaining it, or the infeasible marker
/// (`weight == None`, no edges) when the terminals are not connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerResult {
    pub weight: Option<u64>,
    /// Sorted `(u, v, w)` with `u < v`.
    pub tree_edges: Vec<(usize, usize, u64)>,
}

impl SteinerResult {
    fn infeasible() -> Self {
        SteinerResult {
            weight: None,
            tree_edges: Vec::new(),
        }
    }
}

/// All-pairs shortest paths with one predecessor tree per source.
#[derive(Debug, Clone)]
pub struct Distances {
    n: usize,
    dist: Vec<u64>,
    pred: Vec<usize>,
}

impl Distances {
    fn at(&self, u: usize, v: usize) -> usize {
        (u - 1) * self.n + (v - 1)
    }

    /// Shortest-path distance, `None` when unreachable.
    pub fn get(&self, u: usize, v: usize) -> Option<u64> {
        let d = self.dist[self.at(u, v)];
        (d != INF).then_some(d)
    }

    fn raw(&self, u: usize, v: usize) -> u64 {
        self.dist[self.at(u, v)]
    }

    /// Edges of the stored shortest `u`–`v` path.
    pub fn path(&self, graph: &WeightedGraph, u: usize, v: usize) -> Vec<(usize, usize, u64)> {
        let mut edges = Vec::new();
        let mut x = v;
        while x != u {
            let p = self.pred[self.at(u, x)];
            let w = graph.weight(p, x).expect("predecessor edge exists");
            edges.push((p.min(x), p.max(x), w));
            x = p;
        }
        edges
    }
}

/// One Dijkstra run per source vertex.
pub fn apsp(graph: &WeightedGraph) -> Distances {
    let n = graph.n_vertices();
    let rows = par::map_range(n, |i| {
        let s = i + 1;
        let mut dist = vec![INF; n + 1];
        let mut pred = vec![0; n + 1];
        let mut heap = BinaryHeap::new();
        dist[s] = 0;
        heap.push(Reverse((0u64, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in graph.neighbors(u) {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        (dist, pred)
    });
    let mut out = Distances {
        n,
        dist: Vec::with_capacity(n * n),
        pred: Vec::with_capacity(n * n),
    };
    for (dist, pred) in rows {
        out.dist.extend_from_slice(&dist[1..]);
        out.pred.extend_from_slice(&pred[1..]);
    }
    out
}

/// The table `W[X][q]` for `X ⊆ K`, stored row-major by `X`.
struct Tables {
    n: usize,
    w: Vec<u64>,
}

impl Tables {
    /// Levels 0 and 1 filled in, the rest at `INF`.
    fn new(inst: &SteinerInstance, d: &Distances) -> Self {
        let n = inst.graph.n_vertices();
        let mut w = vec![INF; (1usize << inst.k()) * n];
        w[..n].fill(0);
        for (i, &t) in inst.terminals.iter().enumerate() {
            for q in 1..=n {
                w[(1usize << i) * n + q - 1] = d.raw(t, q);
            }
        }
        Tables { n, w }
    }

    fn get(&self, x: Mask, q: usize) -> u64 {
        self.w[x.index() * self.n + q - 1]
    }

    /// Applies `W[X][q] = min_p d(p, q) + g(p)` for one `X`.
    fn relax(&mut self, x: Mask, d: &Distances, g: impl Fn(usize) -> u64) {
        let n = self.n;
        let gp: Vec<u64> = (1..=n).map(g).collect();
        for q in 1..=n {
            let best = (1..=n)
                .filter(|&p| gp[p - 1] != INF && d.raw(p, q) != INF)
                .map(|p| d.raw(p, q) + gp[p - 1])
                .min()
                .unwrap_or(INF);
            self.w[x.index() * n + q - 1] = best;
        }
    }
}

fn split_min(t: &Tables, x: Mask, p: usize) -> u64 {
    iterate_subsets(x)
        .filter(|&dd| !dd.is_empty() && dd != x)
        .filter_map(|dd| {
            let (a, b) = (t.get(dd, p), t.get(x.difference(dd), p));
            (a != INF && b != INF).then(|| a + b)
        })
        .min()
        .unwrap_or(INF)
}

fn masks_of_size(k: usize, size: usize) -> impl Iterator<Item = Mask> {
    (0u32..1 << k).map(Mask).filter(move |m| m.len() == size)
}

fn solve(inst: &SteinerInstance, fast: bool) -> Result<SteinerResult> {
    let k = inst.k();
    let d = apsp(&inst.graph);
    if k <= 1 {
        return Ok(SteinerResult {
            weight: Some(0),
            tree_edges: Vec::new(),
        });
    }
    let mut t = Tables::new(inst, &d);
    for level in 2..k {
        if fast {
            let ground = GroundSet::new(k)?;
            let g = par::try_map_range(inst.graph.n_vertices(), |i| {
                let fp = band(&t, ground, i + 1, level)?;
                opt_product(&fp, &fp, OptMode::MinSum, ProductMode::Cover)
            })?;
            for x in masks_of_size(k, level) {
                t.relax(x, &d, |p| match g[p - 1].get(x) {
                    ExtendedWeight::Finite(v) => v as u64,
                    _ => INF,
                });
            }
        } else {
            for x in masks_of_size(k, level) {
                let gp: Vec<u64> = (1..=t.n).map(|p| split_min(&t, x, p)).collect();
                t.relax(x, &d, |p| gp[p - 1]);
            }
        }
    }
    let last = inst.terminals[k - 1];
    let rest = Mask(((1u64 << (k - 1)) - 1) as u32);
    let weight = t.get(rest, last);
    if weight == INF {
        return Ok(SteinerResult::infeasible());
    }
    let mut edges = BTreeSet::new();
    build(inst, &d, &t, rest, last, &mut edges)?;
    let tree_edges: Vec<_> = edges.into_iter().collect();
    debug_assert_eq!(tree_edges.iter().map(|e| e.2).sum::<u64>(), weight);
    Ok(SteinerResult {
        weight: Some(weight),
        tree_edges,
    })
}

/// `f_p(X) = W[X][p]` for `1 ≤ |X| ≤ level − 1`, `+∞` elsewhere.
fn band(t: &Tables, ground: GroundSet, p: usize, level: usize) -> Result<ExtendedWeightFunction> {
    let weights = ground
        .masks()
        .map(|x| match t.get(x, p) {
            v if v != INF && (1..level).contains(&x.len()) => ExtendedWeight::Finite(v as i64),
            _ => ExtendedWeight::PosInf,
        })
        .collect();
    ExtendedWeightFunction::with_inferred_bound(ground, weights)
}

/// Collects the edges of an optimal tree for `X ∪ {q}`, re-deriving each
/// decomposition: the lowest `p` that attains `W[X][q]`, then the first
/// split in subset-enumeration order.
fn build(
    inst: &SteinerInstance,
    d: &Distances,
    t: &Tables,
    x: Mask,
    q: usize,
    edges: &mut BTreeSet<(usize, usize, u64)>,
) -> Result<()> {
    let graph = &inst.graph;
    if x.is_empty() {
        return Ok(());
    }
    if x.len() == 1 {
        let terminal = inst.terminals[x.elements().next().expect("nonempty") - 1];
        edges.extend(d.path(graph, terminal, q));
        return Ok(());
    }
    let target = t.get(x, q);
    let ground = GroundSet::new(inst.k())?;
    for p in 1..=graph.n_vertices() {
        let dp = d.raw(p, q);
        if dp == INF || dp > target {
            continue;
        }
        let goal = target - dp;
        if split_min(t, x, p) != goal {
            continue;
        }
        let fp = band(t, ground, p, x.len())?;
        let (rest, part) = opt_witness(&fp, &fp, ProductMode::Subset, x, ExtendedWeight::Finite(goal as i64))?;
        edges.extend(d.path(graph, p, q));
        build(inst, d, t, part, p, edges)?;
        build(inst, d, t, rest, p, edges)?;
        return Ok(());
    }
    Err(Error::NoWitness {
        mask: x.bits(),
        target: target.to_string(),
    })
}

/// Bottom-up evaluation enumerating every split.
pub fn dreyfus_wagner_classic(inst: &SteinerInstance) -> Result<SteinerResult> {
    solve(inst, false)
}

/// Level-wise evaluation with min-sum covering products.
pub fn dreyfus_wagner_fast(inst: &SteinerInstance) -> Result<SteinerResult> {
    solve(inst, true)
}

/// Exhaustive search over edge subsets, for at most [`BRUTE_MAX_EDGES`]
/// edges. Among optimal trees the one with the smallest edge-index mask is
/// returned.
pub fn steiner_brute(inst: &SteinerInstance) -> Result<SteinerResult> {
    let edges = inst.graph.edges();
    if edges.len() > BRUTE_MAX_EDGES {
        return Err(Error::Guard {
            what: "edges",
            value: edges.len(),
            max: BRUTE_MAX_EDGES,
        });
    }
    if inst.k() <= 1 {
        return Ok(SteinerResult {
            weight: Some(0),
            tree_edges: Vec::new(),
        });
    }
    let mut best: Option<(u64, u32)> = None;
    for subset in 0u32..1 << edges.len() {
        let chosen: Vec<_> = Mask(subset).elements().map(|i| edges[i - 1]).collect();
        let weight: u64 = chosen.iter().map(|e| e.2).sum();
        if best.is_some_and(|(w, _)| weight >= w) {
            continue;
        }
        if spans_terminals(inst.graph.n_vertices(), &chosen, &inst.terminals) == Some(true) {
            best = Some((weight, subset));
        }
    }
    Ok(match best {
        Some((weight, subset)) => SteinerResult {
            weight: Some(weight),
            tree_edges: Mask(subset).elements().map(|i| edges[i - 1]).collect(),
        },
        None => SteinerResult::infeasible(),
    })
}

/// `None` if `edges` contain a cycle; otherwise whether all terminals lie
/// in one component.
fn spans_terminals(n: usize, edges: &[(usize, usize, u64)], terminals: &[usize]) -> Option<bool> {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v, _) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return None;
        }
        parent[a] = b;
    }
    let root = find(&mut parent, terminals[0]);
    Some(terminals.iter().all(|&t| find(&mut parent, t) == root))
}

/// Structural check of a claimed Steiner tree: every edge belongs to the
/// graph with its weight, the edges form a single tree, and the tree
/// contains every terminal (an empty edge set is accepted for `k ≤ 1`).
/// Returns the total weight when valid.
pub fn check_tree(graph: &WeightedGraph, terminals: &[usize], edges: &[(usize, usize, u64)]) -> Option<u64> {
    for &(u, v, w) in edges {
        if graph.weight(u, v) != Some(w) {
            return None;
        }
    }
    if edges.is_empty() {
        return (terminals.len() <= 1).then_some(0);
    }
    let n = graph.n_vertices();
    let mut touched: BTreeSet<usize> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    touched.extend(terminals);
    let all: Vec<usize> = touched.into_iter().collect();
    // A forest whose vertex set holds every endpoint and terminal is a
    // single tree exactly when all those vertices share a component.
    match spans_terminals(n, edges, &all) {
        Some(true) => Some(edges.iter().map(|e| e.2).sum()),
        _ => None,
    }
}
