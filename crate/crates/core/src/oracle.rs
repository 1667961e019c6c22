//! Brute-force reference evaluation of every product.
//!
//! These loops walk the defining pair sets literally and share nothing with
//! the transform-based kernels, so agreement between the two is evidence of
//! correctness rather than a tautology.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::mask::{iterate_subsets, GroundSet, Mask};
use crate::optimize::{ExtendedWeight, ExtendedWeightFunction, OptMode};
use crate::products::ProductMode;
use crate::ring::Ring;
use crate::setfn::SetFunction;

/// Largest ground set the reference path accepts by default.
pub const ORACLE_MAX_N: usize = 14;

/// Visits the pair set of `mode` at `s` in a fixed order, stopping early
/// when `visit` breaks.
///
/// The outer loop runs `D` over [`iterate_subsets`] of `s` (of the whole
/// ground set for `Xor`) with `U` its complement; the inner loop chooses
/// `V`. For `Subset` this yields `U` in increasing numeric order.
pub fn visit_pairs<B>(
    mode: ProductMode,
    ground: GroundSet,
    s: Mask,
    mut visit: impl FnMut(Mask, Mask) -> ControlFlow<B>,
) -> ControlFlow<B> {
    match mode {
        ProductMode::Xor => {
            let full = ground.full();
            for d in iterate_subsets(full) {
                let u = full.difference(d);
                visit(u, s.symmetric_difference(u))?;
            }
        }
        ProductMode::Subset => {
            for d in iterate_subsets(s) {
                visit(s.difference(d), d)?;
            }
        }
        ProductMode::Pack => {
            for d in iterate_subsets(s) {
                let u = s.difference(d);
                for v in iterate_subsets(d) {
                    visit(u, v)?;
                }
            }
        }
        ProductMode::Cover | ProductMode::IntersectCover | ProductMode::ExactIntersection(_) => {
            for d in iterate_subsets(s) {
                let u = s.difference(d);
                for w in iterate_subsets(u) {
                    let keep = match mode {
                        ProductMode::IntersectCover => !w.is_empty(),
                        ProductMode::ExactIntersection(l) => w.len() == l,
                        _ => true,
                    };
                    if keep {
                        visit(u, d.union(w))?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

fn guard(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::Guard {
            what: "oracle ground size",
            value: n,
            max: max_n,
        });
    }
    Ok(())
}

/// Literal evaluation of the product's defining sum (`O(3ⁿ)`, or `O(4ⁿ)`
/// for `Xor`). Refuses `n > 14`.
pub fn direct_product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
    mode: ProductMode,
) -> Result<SetFunction<R::Elem>> {
    direct_product_guarded(ring, f, g, mode, ORACLE_MAX_N)
}

/// [`direct_product`] with an explicit ground-size guard.
pub fn direct_product_guarded<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
    mode: ProductMode,
    max_n: usize,
) -> Result<SetFunction<R::Elem>> {
    f.ground().check_same(g.ground())?;
    guard(f.n(), max_n)?;
    if let ProductMode::ExactIntersection(l) = mode {
        if l > f.n() {
            return Err(Error::RankOutOfRange { rank: l, max: f.n() });
        }
    }
    let ground = f.ground();
    let mut out = Vec::with_capacity(ground.size());
    for s in ground.masks() {
        let mut acc = ring.zero();
        let flow = visit_pairs(mode, ground, s, |u, v| {
            match ring.mul_add_assign(&mut acc, f.get(u), g.get(v)) {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(e),
            }
        });
        if let ControlFlow::Break(e) = flow {
            return Err(e);
        }
        out.push(acc);
    }
    SetFunction::new(ground, out)
}

/// Literal min-sum / max-sum evaluation over the product's pair set;
/// infinities absorb.
pub fn direct_opt_product(
    f: &ExtendedWeightFunction,
    g: &ExtendedWeightFunction,
    mode: OptMode,
    product: ProductMode,
) -> Result<ExtendedWeightFunction> {
    f.ground().check_same(g.ground())?;
    guard(f.n(), ORACLE_MAX_N)?;
    let ground = f.ground();
    let mut out = Vec::with_capacity(ground.size());
    for s in ground.masks() {
        let mut best = mode.absorbing();
        let _ = visit_pairs::<()>(product, ground, s, |u, v| {
            if let (Some(a), Some(b)) = (f.get(u).finite(), g.get(v).finite()) {
                let cand = ExtendedWeight::Finite(a + b);
                if mode.prefers(cand, best) {
                    best = cand;
                }
            }
            ControlFlow::Continue(())
        });
        out.push(best);
    }
    ExtendedWeightFunction::new(ground, out, f.bound() + g.bound())
}
