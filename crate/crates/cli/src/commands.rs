use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use subsetconv::combi::{self, BranchingSpec, PathwayInstance};
use subsetconv::graph::{Hypergraph, SimpleGraph, WeightedGraph};
use subsetconv::hyper::{self, HyperResult};
use subsetconv::optimize::opt_product;
use subsetconv::products::product;
use subsetconv::steiner::{self, SteinerInstance};
use subsetconv::transform::{mobius_inversion, zeta_transform};
use subsetconv::{
    BigIntRing, CheckedWord, ExtendedWeight, ExtendedWeightFunction, OptMode, ProductMode, RationalRing, Ring,
    SetFunction,
};

use crate::error::{CliError, CliResult};
use crate::format::{self, ground, show_rational, write_sf, Kind, SfFile, Values};

fn to_i64(values: &[BigInt]) -> CliResult<Vec<i64>> {
    values
        .iter()
        .map(|v| {
            v.to_i64().ok_or_else(|| {
                CliError::Guard(format!("value {v} does not fit in i64; use a `big` file or --ring big"))
            })
        })
        .collect()
}

fn to_rat(values: &Values) -> CliResult<Vec<BigRational>> {
    match values {
        Values::Int(v) => Ok(v.iter().cloned().map(BigRational::from_integer).collect()),
        Values::Rat(v) => Ok(v.clone()),
        Values::Opt(_) => Err(CliError::Format("expected an int, big or rat table, got opt".into())),
    }
}

fn ints(f: &SfFile) -> CliResult<&[BigInt]> {
    match &f.values {
        Values::Int(v) => Ok(v),
        _ => Err(CliError::Format("expected an int or big table".into())),
    }
}

fn table<R: Ring>(n: usize, values: Vec<R::Elem>) -> CliResult<SetFunction<R::Elem>> {
    Ok(SetFunction::new(ground(n)?, values)?)
}

pub fn zeta(input: &Path, invert: bool) -> CliResult<String> {
    let f = format::load_sf(input)?;
    fn go<R: Ring>(ring: &R, f: SetFunction<R::Elem>, invert: bool) -> CliResult<Vec<R::Elem>> {
        let out = if invert {
            mobius_inversion(ring, &f)?
        } else {
            zeta_transform(ring, &f)?
        };
        Ok(out.into_values())
    }
    Ok(match f.kind {
        Kind::Int => {
            let v = go(&CheckedWord, table::<CheckedWord>(f.n, to_i64(ints(&f)?)?)?, invert)?;
            write_sf(f.n, Kind::Int, &v, i64::to_string)
        }
        Kind::Big => {
            let v = go(&BigIntRing, table::<BigIntRing>(f.n, ints(&f)?.to_vec())?, invert)?;
            write_sf(f.n, Kind::Big, &v, BigInt::to_string)
        }
        Kind::Rat => {
            let v = go(&RationalRing, table::<RationalRing>(f.n, to_rat(&f.values)?)?, invert)?;
            write_sf(f.n, Kind::Rat, &v, show_rational)
        }
        Kind::Opt => return Err(CliError::Format("zeta needs an int, big or rat table".into())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RingArg {
    I64,
    Big,
}

pub fn conv(a: &Path, b: &Path, mode: ProductMode, ring: RingArg) -> CliResult<String> {
    let fa = format::load_sf(a)?;
    let fb = format::load_sf(b)?;
    if fa.kind == Kind::Opt || fb.kind == Kind::Opt {
        return Err(CliError::Format(
            "conv needs ring-valued tables; use optconv for opt files".into(),
        ));
    }
    if fa.kind == Kind::Rat || fb.kind == Kind::Rat {
        let f = table::<RationalRing>(fa.n, to_rat(&fa.values)?)?;
        let g = table::<RationalRing>(fb.n, to_rat(&fb.values)?)?;
        let h = product(&RationalRing, &f, &g, mode)?;
        return Ok(write_sf(fa.n, Kind::Rat, h.values(), show_rational));
    }
    match ring {
        RingArg::I64 => {
            let f = table::<CheckedWord>(fa.n, to_i64(ints(&fa)?)?)?;
            let g = table::<CheckedWord>(fb.n, to_i64(ints(&fb)?)?)?;
            let h = product(&CheckedWord, &f, &g, mode)?;
            Ok(write_sf(fa.n, Kind::Int, h.values(), i64::to_string))
        }
        RingArg::Big => {
            let f = table::<BigIntRing>(fa.n, ints(&fa)?.to_vec())?;
            let g = table::<BigIntRing>(fb.n, ints(&fb)?.to_vec())?;
            let h = product(&BigIntRing, &f, &g, mode)?;
            Ok(write_sf(fa.n, Kind::Big, h.values(), BigInt::to_string))
        }
    }
}

fn weights(f: &SfFile) -> CliResult<ExtendedWeightFunction> {
    let w = match &f.values {
        Values::Opt(v) => v.clone(),
        Values::Int(v) => to_i64(v)?.into_iter().map(ExtendedWeight::Finite).collect(),
        Values::Rat(_) => return Err(CliError::Format("optconv needs an opt or int table".into())),
    };
    Ok(ExtendedWeightFunction::with_inferred_bound(ground(f.n)?, w)?)
}

pub fn optconv(a: &Path, b: &Path, opt: OptMode, mode: ProductMode) -> CliResult<String> {
    let f = weights(&format::load_sf(a)?)?;
    let g = weights(&format::load_sf(b)?)?;
    let h = opt_product(&f, &g, opt, mode)?;
    Ok(write_sf(f.n(), Kind::Opt, h.weights(), ExtendedWeight::to_string))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SteinerAlgo {
    Classic,
    Fast,
    Brute,
}

pub fn steiner(graph: &Path, terminals: &str, algo: SteinerAlgo) -> CliResult<String> {
    let g = format::load_graph(graph)?;
    let inst = SteinerInstance::new(g, format::vertex_list("-t", terminals)?)?;
    let r = match algo {
        SteinerAlgo::Classic => steiner::dreyfus_wagner_classic(&inst)?,
        SteinerAlgo::Fast => steiner::dreyfus_wagner_fast(&inst)?,
        SteinerAlgo::Brute => steiner::steiner_brute(&inst)?,
    };
    let Some(w) = r.weight else {
        return Err(CliError::Infeasible("infeasible\n".into()));
    };
    let mut out = format!("weight {w}\n");
    for (u, v, w) in r.tree_edges {
        let _ = writeln!(out, "e {u} {v} {w}");
    }
    Ok(out)
}

fn simple(g: &WeightedGraph) -> CliResult<SimpleGraph> {
    Ok(SimpleGraph::new(
        g.n_vertices(),
        g.edges().iter().map(|&(u, v, _)| (u, v)),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ColorReport {
    Count,
    Subgraphs,
    Chromatic,
}

pub fn color(graph: &Path, k: Option<usize>, report: ColorReport) -> CliResult<String> {
    let g = simple(&format::load_graph(graph)?)?;
    let need_k = || k.ok_or_else(|| CliError::Usage("-k is required for this report".into()));
    Ok(match report {
        ColorReport::Count => format!("count {}\n", combi::count_proper_colorings(&g, need_k()?)?),
        ColorReport::Chromatic => format!("chromatic {}\n", combi::chromatic_number(&g)?),
        ColorReport::Subgraphs => {
            let r = combi::colorable_subgraphs(&g, need_k()?)?;
            let mut out = write_sf(g.n_vertices(), Kind::Big, r.counts.values(), BigInt::to_string);
            for m in r.maximal {
                let _ = writeln!(out, "c maximal {}", m.bits());
            }
            out
        }
    })
}

pub fn cliquepack(graph: &Path, k: usize, ell: usize) -> CliResult<String> {
    let g = simple(&format::load_graph(graph)?)?;
    let (ok, count) = combi::clique_packing(&g, k, ell)?;
    Ok(format!("packable {ok}\ncount {count}\n"))
}

pub fn branch(input: &Path, alpha: &str) -> CliResult<String> {
    let f = format::load_sf(input)?;
    let alpha = format::rational_arg("--alpha", alpha)?;
    let table = table::<RationalRing>(f.n, to_rat(&f.values)?)?;
    let g = combi::branching_expectation(&BranchingSpec::new(table, alpha)?)?;
    Ok(write_sf(f.n, Kind::Rat, g.values(), show_rational))
}

pub fn pathway(graph: &Path, leaves: &str, k: usize, delta: &str, seed: u64) -> CliResult<String> {
    let g = format::load_graph(graph)?;
    let leaves = format::vertex_list("--leaves", leaves)?;
    let delta = format::rational_arg("--delta", delta)?;
    let inst = PathwayInstance::new(g, &leaves, k, delta, seed)?;
    let r = combi::pathway_search(&inst)?;
    let mut out = format!("trials {}\n", r.trials);
    for (v, w) in r.weights.iter().enumerate() {
        match w {
            Some(w) => writeln!(out, "{} {w}", v + 1),
            None => writeln!(out, "{} inf", v + 1),
        }
        .expect("string write");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum HyperMode {
    Mcsh,
    Msth,
}

fn show_hyper(h: &Hypergraph, r: HyperResult) -> CliResult<String> {
    let Some(w) = r.weight else {
        return Err(CliError::Infeasible("infeasible\n".into()));
    };
    let mut out = format!("weight {w}\n");
    for i in r.edges {
        let (e, w) = h.edges()[i];
        let vs: Vec<String> = e.elements().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "h {w} {}", vs.join(" "));
    }
    Ok(out)
}

pub fn hyper(graph: &Path, mode: HyperMode) -> CliResult<String> {
    let h = format::load_hypergraph(graph)?;
    let r = match mode {
        HyperMode::Mcsh => hyper::mcsh(&h)?,
        HyperMode::Msth => hyper::msth(&h)?,
    };
    show_hyper(&h, r)
}
