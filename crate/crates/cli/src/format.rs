//! The three text formats: set-function tables (`sf`), weighted graphs
//! (`p gr`) and weighted hypergraphs (`p hg`). Blank lines and lines
//! starting with `c` or `#` are skipped.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use subsetconv::graph::{Hypergraph, WeightedGraph};
use subsetconv::ring::format_rational;
use subsetconv::{ExtendedWeight, GroundSet, Mask, MAX_GROUND};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Big,
    Rat,
    Opt,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Int => "int",
            Kind::Big => "big",
            Kind::Rat => "rat",
            Kind::Opt => "opt",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    /// `int` and `big` files.
    Int(Vec<BigInt>),
    Rat(Vec<BigRational>),
    Opt(Vec<ExtendedWeight>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfFile {
    pub n: usize,
    pub kind: Kind,
    pub values: Values,
}

fn format_err(path: &str, line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Format(format!("{path}:{line}: {msg}"))
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#') && !t.starts_with("c ") && t != "c").then_some((i + 1, t))
    })
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            (q != BigInt::from(0)).then(|| BigRational::new(p, q))
        }
        None => tok.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Parses a `p/q` or integer literal given on the command line.
pub fn rational_arg(name: &str, tok: &str) -> CliResult<BigRational> {
    parse_rational(tok).ok_or_else(|| CliError::Usage(format!("{name}: expected p/q, got `{tok}`")))
}

pub fn parse_sf(path: &str, text: &str) -> CliResult<SfFile> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| format_err(path, 1, "missing `sf <n>` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"sf") || !(2..=3).contains(&toks.len()) {
        return Err(format_err(path, hl, "expected header `sf <n> [int|big|rat|opt]`"));
    }
    let n: usize = toks[1]
        .parse()
        .map_err(|_| format_err(path, hl, format!("bad ground size `{}`", toks[1])))?;
    if n > MAX_GROUND {
        return Err(CliError::Guard(format!(
            "ground set of {n} elements exceeds the cap of {MAX_GROUND}"
        )));
    }
    let kind = match toks.get(2).copied().unwrap_or("int") {
        "int" => Kind::Int,
        "big" => Kind::Big,
        "rat" => Kind::Rat,
        "opt" => Kind::Opt,
        other => return Err(format_err(path, hl, format!("unknown value kind `{other}`"))),
    };
    let body: Vec<(usize, &str)> = lines.collect();
    let size = 1usize << n;
    if body.len() != size {
        return Err(CliError::Format(format!(
            "{path}: expected {size} value lines for n = {n}, found {}",
            body.len()
        )));
    }
    let mut ints = Vec::new();
    let mut rats = Vec::new();
    let mut opts = Vec::new();
    for (expected, (ln, line)) in body.into_iter().enumerate() {
        let mut it = line.split_whitespace();
        let (Some(m), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(format_err(path, ln, "expected `<mask> <value>`"));
        };
        let mask: usize = m.parse().map_err(|_| format_err(path, ln, format!("bad mask `{m}`")))?;
        if mask >= size {
            return Err(format_err(path, ln, format!("mask {mask} out of range for n = {n}")));
        }
        if mask != expected {
            return Err(format_err(
                path,
                ln,
                format!("mask {mask} out of order (expected {expected}; masks must ascend, each once)"),
            ));
        }
        let bad = || format_err(path, ln, format!("bad {} value `{v}`", kind.name()));
        match kind {
            Kind::Int | Kind::Big => ints.push(v.parse::<BigInt>().map_err(|_| bad())?),
            Kind::Rat => rats.push(parse_rational(v).ok_or_else(bad)?),
            Kind::Opt => opts.push(v.parse::<ExtendedWeight>().map_err(|_| bad())?),
        }
    }
    let values = match kind {
        Kind::Int | Kind::Big => Values::Int(ints),
        Kind::Rat => Values::Rat(rats),
        Kind::Opt => Values::Opt(opts),
    };
    Ok(SfFile { n, kind, values })
}

pub fn load_sf(path: &Path) -> CliResult<SfFile> {
    parse_sf(&path.display().to_string(), &read(path)?)
}

/// Writes a full `sf` file: header, then every mask in ascending order.
pub fn write_sf<T>(n: usize, kind: Kind, values: &[T], show: impl Fn(&T) -> String) -> String {
    let mut out = format!("sf {n} {}\n", kind.name());
    for (m, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{m} {}", show(v));
    }
    out
}

pub fn show_rational(r: &BigRational) -> String {
    format_rational(r)
}

/// Declared counts and the remaining numbered lines.
type Header<'a> = (usize, usize, Vec<(usize, &'a str)>);

fn header<'a>(path: &str, text: &'a str, tag: &str, prefix: &str) -> CliResult<Header<'a>> {
    let mut lines = content_lines(text);
    let (hl, h) = lines
        .next()
        .ok_or_else(|| format_err(path, 1, format!("missing `p {tag} <n> <m>` header")))?;
    let toks: Vec<&str> = h.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != tag {
        return Err(format_err(path, hl, format!("expected header `p {tag} <n> <m>`")));
    }
    let n: usize = toks[2].parse().map_err(|_| format_err(path, hl, "bad vertex count"))?;
    let m: usize = toks[3].parse().map_err(|_| format_err(path, hl, "bad edge count"))?;
    let body: Vec<(usize, &str)> = lines.collect();
    if body.len() != m {
        return Err(CliError::Format(format!(
            "{path}: header declares {m} edge lines, found {}",
            body.len()
        )));
    }
    if let Some((ln, _)) = body.iter().find(|(_, l)| l.split_whitespace().next() != Some(prefix)) {
        return Err(format_err(path, *ln, format!("expected a `{prefix}` line")));
    }
    Ok((n, m, body))
}

fn number<T: std::str::FromStr>(path: &str, ln: usize, tok: &str, what: &str) -> CliResult<T> {
    tok.parse()
        .map_err(|_| format_err(path, ln, format!("bad {what} `{tok}`")))
}

pub fn parse_graph(path: &str, text: &str) -> CliResult<WeightedGraph> {
    let (n, _, body) = header(path, text, "gr", "e")?;
    let mut edges = Vec::with_capacity(body.len());
    for (ln, line) in body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(format_err(path, ln, "expected `e <u> <v> <w>`"));
        }
        let u: usize = number(path, ln, toks[1], "vertex")?;
        let v: usize = number(path, ln, toks[2], "vertex")?;
        let w: u64 = number(path, ln, toks[3], "weight")?;
        if u == v || u == 0 || v == 0 || u > n || v > n || w == 0 {
            return Err(format_err(
                path,
                ln,
                format!("edge ({u}, {v}, {w}) needs distinct vertices in 1..={n} and a positive weight"),
            ));
        }
        edges.push((u, v, w));
    }
    WeightedGraph::new(n, edges).map_err(|e| CliError::Format(format!("{path}: {e}")))
}

pub fn load_graph(path: &Path) -> CliResult<WeightedGraph> {
    parse_graph(&path.display().to_string(), &read(path)?)
}

pub fn parse_hypergraph(path: &str, text: &str) -> CliResult<Hypergraph> {
    let (n, _, body) = header(path, text, "hg", "h")?;
    if n > MAX_GROUND {
        return Err(CliError::Guard(format!("{n} vertices exceed the cap of {MAX_GROUND}")));
    }
    let mut edges = Vec::with_capacity(body.len());
    for (ln, line) in body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(format_err(path, ln, "expected `h <w> <v1> ... <vj>` with j >= 1"));
        }
        let w: u64 = number(path, ln, toks[1], "weight")?;
        if w == 0 {
            return Err(format_err(path, ln, "hyperedge weight must be positive"));
        }
        let mut mask = Mask::EMPTY;
        for t in &toks[2..] {
            let v: usize = number(path, ln, t, "vertex")?;
            if v == 0 || v > n {
                return Err(format_err(path, ln, format!("vertex {v} outside 1..={n}")));
            }
            if mask.contains(v) {
                return Err(format_err(path, ln, format!("vertex {v} repeated in a hyperedge")));
            }
            mask = mask.union(Mask::from_elements([v]));
        }
        edges.push((mask, w));
    }
    Hypergraph::new(n, edges).map_err(|e| CliError::Format(format!("{path}: {e}")))
}

pub fn load_hypergraph(path: &Path) -> CliResult<Hypergraph> {
    parse_hypergraph(&path.display().to_string(), &read(path)?)
}

/// Parses `v1,v2,...`; the empty string is the empty list.
pub fn vertex_list(name: &str, s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("{name}: bad vertex `{t}`")))
        })
        .collect()
}

/// The ground set of a parsed table.
pub fn ground(n: usize) -> CliResult<GroundSet> {
    Ok(GroundSet::new(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sf_round_trip() {
        let text = "sf 2 rat\n0 0\n1 1/2\n2 -3\n3 7/4\n";
        let f = parse_sf("t", text).unwrap();
        let Values::Rat(v) = &f.values else { panic!() };
        assert_eq!(write_sf(2, Kind::Rat, v, show_rational), text);
    }

    #[test]
    fn sf_errors() {
        let e = parse_sf("bad.sf", "sf 2\n0 1\n1 2\n2 3\n").unwrap_err();
        assert!(e.to_string().contains("expected 4 value lines for n = 2, found 3"));
        assert!(parse_sf("t", "sf 1\n1 1\n0 1\n").is_err());
        assert!(parse_sf("t", "sf 1\n0 1\n2 1\n").is_err());
        assert!(parse_sf("t", "sf 1\n0 1\n1 x\n").is_err());
        assert!(parse_sf("t", "sf 1 int\n0 inf\n1 1\n").is_err());
        assert!(parse_sf("t", "sf 1 opt\n0 inf\n1 -inf\n").is_ok());
        assert!(parse_sf("t", "sf 1 foo\n0 1\n1 1\n").is_err());
        assert!(matches!(parse_sf("t", "sf 29\n"), Err(CliError::Guard(_))));
    }

    #[test]
    fn graph_formats() {
        let g = parse_graph("t", "c comment\np gr 3 2\ne 1 2 1\ne 2 3 4\n").unwrap();
        assert_eq!(g.edges(), &[(1, 2, 1), (2, 3, 4)]);
        assert!(parse_graph("t", "p gr 3 2\ne 1 2 1\n").is_err());
        assert!(parse_graph("t", "p gr 3 1\ne 1 1 1\n").is_err());
        assert!(parse_graph("t", "p gr 3 1\ne 1 4 1\n").is_err());
        assert!(parse_graph("t", "p gr 3 1\ne 1 2 0\n").is_err());
        let h = parse_hypergraph("t", "p hg 3 2\nh 2 1 2 3\nh 1 2\n").unwrap();
        assert_eq!(h.edges(), &[(Mask(0b111), 2), (Mask(0b010), 1)]);
        assert!(parse_hypergraph("t", "p hg 3 1\nh 2\n").is_err());
        assert!(parse_hypergraph("t", "p hg 3 1\nh 2 1 1\n").is_err());
        assert!(parse_hypergraph("t", "p hg 3 1\nh 2 4\n").is_err());
    }

    #[test]
    fn lists_and_rationals() {
        assert_eq!(vertex_list("t", "1, 3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(vertex_list("t", "").unwrap(), Vec::<usize>::new());
        assert!(vertex_list("t", "1,x").is_err());
        assert_eq!(show_rational(&rational_arg("a", "2/4").unwrap()), "1/2");
        assert!(rational_arg("a", "1/0").is_err());
    }
}
