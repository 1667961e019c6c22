//! Lightest `k`-vertex trees whose leaves lie in an allowed set, found by
//! color coding.
//!
//! A trial colors every vertex uniformly from `{1, …, k}` and computes, for
//! every vertex `v` and color set `S ∋ c(v)`, the weight `W(v, S)` of a
//! lightest tree rooted at `v` whose vertices carry exactly the colors of
//! `S` once each and whose non-root leaves are all allowed:
//!
//! ```text
//! W(v, {c(v)}) = 0 if v ∈ I, ∞ otherwise,
//! A(v, S) = min_{u ~ v, c(u) ∈ S∖{c(v)}}  W(u, S∖{c(v)}) + w(u, v),
//! B(v, S) = min_{T ∩ U = {c(v)}, T ∪ U = S, T, U ⊂ S}  W(v, T) + W(v, U),
//! W(v, S) = min(A(v, S), B(v, S)).
//! ```
//!
//! `B` is a min-sum subset convolution over the colors other than `c(v)`.
//! A tree on `k` vertices is rainbow with probability `k!/k^k ≥ e^{-k}`, so
//! `⌈e^k ln(1/δ)⌉` independent trials miss the optimum with probability at
//! most `δ`.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::mask::{GroundSet, Mask};
use crate::optimize::{opt_convolve, ExtendedWeight, ExtendedWeightFunction, OptMode};
use crate::par;

pub const MAX_PATHWAY_K: usize = 20;

/// Largest number of edge subsets [`pathway_brute`] will enumerate.
const BRUTE_MAX_SUBSETS: u128 = 20_000_000;

/// Trials evaluated between reductions in [`pathway_search`].
const TRIAL_BATCH: u64 = 1024;

const INF: u64 = u64::MAX;

#[derive(Debug, Clone)]
pub struct PathwayInstance {
    graph: WeightedGraph,
    leaves: Vec<bool>,
    k: usize,
    delta: BigRational,
    seed: u64,
}

impl PathwayInstance {
    /// `leaves` lists the allowed leaf vertices; repeats are ignored.
    pub fn new(graph: WeightedGraph, leaves: &[usize], k: usize, delta: BigRational, seed: u64) -> Result<Self> {
        if !(1..=MAX_PATHWAY_K).contains(&k) {
            return Err(Error::InvalidArgument(format!(
                "tree size k = {k} outside 1..={MAX_PATHWAY_K}"
            )));
        }
        if delta <= BigRational::zero() || delta >= BigRational::one() {
            return Err(Error::InvalidArgument(format!("delta = {delta} outside (0, 1)")));
        }
        let n = graph.n_vertices();
        let mut allowed = vec![false; n];
        for &v in leaves {
            if v == 0 || v > n {
                return Err(Error::InvalidArgument(format!("leaf {v} outside vertices 1..={n}")));
            }
            allowed[v - 1] = true;
        }
        Ok(PathwayInstance {
            graph,
            leaves: allowed,
            k,
            delta,
            seed,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.leaves[v - 1]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Per-vertex optimum (index `v - 1`, `None` when no tree exists) and the
/// number of trials behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathwayResult {
    pub weights: Vec<Option<u64>>,
    pub trials: u64,
}

/// `⌈e^k · ln(1/δ)⌉`, evaluated in double precision.
pub fn trial_count(k: usize, delta: &BigRational) -> u64 {
    let d = delta.to_f64().unwrap_or(f64::MIN_POSITIVE);
    ((k as f64).exp() * (1.0 / d).ln()).ceil().max(1.0) as u64
}

/// The coloring used by trial `trial`: a ChaCha8 stream selected by the
/// trial index under the instance seed.
pub fn trial_coloring(inst: &PathwayInstance, trial: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
    rng.set_stream(trial);
    (0..inst.graph.n_vertices())
        .map(|_| rng.random_range(1..=inst.k))
        .collect()
}

/// Drops bit `c` and shifts the higher bits down.
fn compress(s: u32, c: usize) -> u32 {
    (s & ((1 << c) - 1)) | ((s >> (c + 1)) << c)
}

/// Inverse of [`compress`]; bit `c` of the result is clear.
fn expand(t: u32, c: usize) -> u32 {
    (t & ((1 << c) - 1)) | ((t >> c) << (c + 1))
}

/// `W(v, {1..k})` for every vertex under `coloring` (index `v - 1`, colors
/// in `1..=k`).
pub fn pathway_trial(inst: &PathwayInstance, coloring: &[usize]) -> Result<Vec<Option<u64>>> {
    let n = inst.graph.n_vertices();
    let k = inst.k;
    if coloring.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: coloring.len(),
        });
    }
    if let Some(&c) = coloring.iter().find(|&&c| c == 0 || c > k) {
        return Err(Error::InvalidArgument(format!("color {c} outside 1..={k}")));
    }
    let width = 1usize << k;
    let mut w = vec![INF; n * width];
    for v in 0..n {
        if inst.leaves[v] {
            w[v * width + (1 << (coloring[v] - 1))] = 0;
        }
    }
    let reduced = GroundSet::new(k - 1)?;
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); k + 1];
    for s in 0..width as u32 {
        by_size[s.count_ones() as usize].push(s);
    }
    for (s, sets) in by_size.iter().enumerate().skip(2) {
        for v in 0..n {
            let c = coloring[v] - 1;
            let own = 1u32 << c;
            let row = v * width;
            let split = if s >= 3 {
                let h = ExtendedWeightFunction::with_inferred_bound(
                    reduced,
                    reduced
                        .masks()
                        .map(|t| match w[row + (expand(t.bits(), c) | own) as usize] {
                            x if x != INF && (1..=s - 2).contains(&t.len()) => ExtendedWeight::Finite(x as i64),
                            _ => ExtendedWeight::PosInf,
                        })
                        .collect(),
                )?;
                Some(opt_convolve(&h, &h, OptMode::MinSum)?)
            } else {
                None
            };
            for &set in sets {
                if set & own == 0 {
                    continue;
                }
                let rest = set ^ own;
                let mut best = INF;
                for &(u, wt) in inst.graph.neighbors(v + 1) {
                    let cu = 1u32 << (coloring[u - 1] - 1);
                    if rest & cu != 0 {
                        let sub = w[(u - 1) * width + rest as usize];
                        if sub != INF {
                            best = best.min(sub + wt);
                        }
                    }
                }
                if let Some(conv) = &split {
                    if let ExtendedWeight::Finite(x) = conv.get(Mask(compress(rest, c))) {
                        best = best.min(x as u64);
                    }
                }
                w[row + set as usize] = best;
            }
        }
    }
    Ok((0..n)
        .map(|v| Some(w[v * width + width - 1]).filter(|&x| x != INF))
        .collect())
}

fn merge(acc: &mut [Option<u64>], other: &[Option<u64>]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a = match (*a, *b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
    }
}

/// Minimum over [`trial_count`] seeded trials.
pub fn pathway_search(inst: &PathwayInstance) -> Result<PathwayResult> {
    let trials = trial_count(inst.k, &inst.delta);
    let mut best = vec![None; inst.graph.n_vertices()];
    let mut start = 0;
    while start < trials {
        let batch = (trials - start).min(TRIAL_BATCH);
        let results = par::try_map_range(batch as usize, |i| {
            pathway_trial(inst, &trial_coloring(inst, start + i as u64))
        })?;
        for r in &results {
            merge(&mut best, r);
        }
        start += batch;
    }
    Ok(PathwayResult { weights: best, trials })
}

fn binomial(m: usize, r: usize) -> u128 {
    if r > m {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((m - i) as u128) / (i as u128 + 1))
}

/// Exhaustive optimum: every set of `k - 1` edges forming a tree on `k`
/// vertices is tried at each of its vertices as root.
pub fn pathway_brute(inst: &PathwayInstance) -> Result<Vec<Option<u64>>> {
    let n = inst.graph.n_vertices();
    let k = inst.k;
    let mut best: Vec<Option<u64>> = vec![None; n];
    if k == 1 {
        for (v, b) in best.iter_mut().enumerate() {
            *b = inst.leaves[v].then_some(0);
        }
        return Ok(best);
    }
    let edges = inst.graph.edges();
    let count = binomial(edges.len(), k - 1);
    if count > BRUTE_MAX_SUBSETS {
        return Err(Error::Guard {
            what: "edge subsets",
            value: count.min(usize::MAX as u128) as usize,
            max: BRUTE_MAX_SUBSETS as usize,
        });
    }
    let r = k - 1;
    if r > edges.len() {
        return Ok(best);
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut parent = vec![0usize; n + 1];
    let mut degree = vec![0usize; n + 1];
    loop {
        evaluate(inst, edges, &idx, &mut parent, &mut degree, &mut best);
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if idx[i] < edges.len() - r + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn evaluate(
    inst: &PathwayInstance,
    edges: &[(usize, usize, u64)],
    chosen: &[usize],
    parent: &mut [usize],
    degree: &mut [usize],
    best: &mut [Option<u64>],
) {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut vertices = Vec::with_capacity(chosen.len() + 1);
    for &e in chosen {
        let (u, v, _) = edges[e];
        for x in [u, v] {
            if !vertices.contains(&x) {
                vertices.push(x);
                parent[x] = x;
                degree[x] = 0;
            }
        }
    }
    if vertices.len() != inst.k {
        return;
    }
    let mut weight = 0;
    for &e in chosen {
        let (u, v, w) = edges[e];
        let (a, b) = (find(parent, u), find(parent, v));
        if a == b {
            return;
        }
        parent[a] = b;
        degree[u] += 1;
        degree[v] += 1;
        weight += w;
    }
    let bad: Vec<usize> = vertices
        .iter()
        .copied()
        .filter(|&x| degree[x] == 1 && !inst.leaves[x - 1])
        .collect();
    // The root is exempt from the leaf condition, so at most one offending
    // leaf can be tolerated, and only as the root.
    let roots: Vec<usize> = match bad.len() {
        0 => vertices,
        1 => bad,
        _ => return,
    };
    for v in roots {
        let b = &mut best[v - 1];
        *b = Some(b.map_or(weight, |x| x.min(weight)));
    }
}
