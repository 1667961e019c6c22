//! Oracle-equivalence checks on seeded random instances.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subsetconv::graph::WeightedGraph;
use subsetconv::optimize::opt_product;
use subsetconv::oracle::{direct_opt_product, direct_product};
use subsetconv::products::product;
use subsetconv::steiner::{self, SteinerInstance};
use subsetconv::transform::{mobius_inversion, zeta_transform};
use subsetconv::{CheckedWord, ExtendedWeight, ExtendedWeightFunction, GroundSet, OptMode, ProductMode, SetFunction};

use crate::error::{CliError, CliResult};

/// Largest `--max-n` accepted; the reference products are cubic in `2ⁿ`.
pub const MAX_SELFTEST_N: usize = 12;

const SEED: u64 = 0x5eed;

fn modes(n: usize) -> Vec<ProductMode> {
    let mut m = vec![
        ProductMode::Subset,
        ProductMode::Cover,
        ProductMode::Pack,
        ProductMode::IntersectCover,
        ProductMode::Xor,
    ];
    m.extend((0..=n.min(2)).map(ProductMode::ExactIntersection));
    m
}

fn check(out: &mut String, failures: &mut usize, name: &str, ok: bool) {
    if !ok {
        *failures += 1;
    }
    let _ = writeln!(out, "{} {name}", if ok { "ok" } else { "FAIL" });
}

pub fn run(max_n: usize) -> CliResult<String> {
    if max_n > MAX_SELFTEST_N {
        return Err(CliError::Usage(format!("--max-n {max_n} exceeds {MAX_SELFTEST_N}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = String::new();
    let mut failures = 0;
    for n in 0..=max_n {
        let ground = GroundSet::new(n)?;
        let f = SetFunction::from_fn(ground, |_| rng.random_range(-50i64..=50));
        let g = SetFunction::from_fn(ground, |_| rng.random_range(-50i64..=50));
        let round = mobius_inversion(&CheckedWord, &zeta_transform(&CheckedWord, &f)?)?;
        check(
            &mut out,
            &mut failures,
            &format!("n={n} mobius(zeta(f)) = f"),
            round == f,
        );
        for mode in modes(n) {
            let ok = product(&CheckedWord, &f, &g, mode)? == direct_product(&CheckedWord, &f, &g, mode)?;
            check(&mut out, &mut failures, &format!("n={n} {mode} product"), ok);
        }
        let weight = |rng: &mut ChaCha8Rng| match rng.random_range(0..8) {
            0 => ExtendedWeight::PosInf,
            _ => ExtendedWeight::Finite(rng.random_range(-8..=8)),
        };
        let a = ExtendedWeightFunction::new(ground, ground.masks().map(|_| weight(&mut rng)).collect(), 8)?;
        let b = ExtendedWeightFunction::new(ground, ground.masks().map(|_| weight(&mut rng)).collect(), 8)?;
        for opt in [OptMode::MinSum, OptMode::MaxSum] {
            let (a, b) = match opt {
                OptMode::MinSum => (a.clone(), b.clone()),
                OptMode::MaxSum => (a.negate(), b.negate()),
            };
            for mode in modes(n) {
                let ok = opt_product(&a, &b, opt, mode)?.weights() == direct_opt_product(&a, &b, opt, mode)?.weights();
                check(&mut out, &mut failures, &format!("n={n} {opt:?} {mode} product"), ok);
            }
        }
    }
    for trial in 0..10 {
        let n = rng.random_range(2..=8usize);
        let mut edges = Vec::new();
        for _ in 0..rng.random_range(1..=12) {
            let (u, v) = (rng.random_range(1..=n), rng.random_range(1..=n));
            if u != v {
                edges.push((u, v, rng.random_range(1..=6)));
            }
        }
        let graph = WeightedGraph::new(n, edges)?;
        let k = rng.random_range(1..=n.min(5));
        let mut terminals: Vec<usize> = (1..=n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            terminals.swap(i, j);
        }
        terminals.truncate(k);
        let inst = SteinerInstance::new(graph, terminals)?;
        let brute = steiner::steiner_brute(&inst)?.weight;
        let ok = steiner::dreyfus_wagner_classic(&inst)?.weight == brute
            && steiner::dreyfus_wagner_fast(&inst)?.weight == brute;
        check(&mut out, &mut failures, &format!("steiner instance {trial}"), ok);
    }
    if failures > 0 {
        return Err(CliError::SelfTest(format!("{out}{failures} checks failed")));
    }
    Ok(out)
}
