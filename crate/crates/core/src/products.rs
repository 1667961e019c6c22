//! Ring-valued products of set functions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::par;
use crate::ring::Ring;
use crate::setfn::SetFunction;
use crate::transform::{self, ranked_zeta, RankedTable};

/// The pair set a product sums over, at target set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductMode {
    /// `U ⊎ V = S`.
    Subset,
    /// `U ∪ V = S`.
    Cover,
    /// `U, V ⊆ S`, `U ∩ V = ∅`.
    Pack,
    /// `U ∪ V = S`, `U ∩ V ≠ ∅`.
    IntersectCover,
    /// `U ∪ V = S`, `|U ∩ V| = ℓ`.
    ExactIntersection(usize),
    /// `U Δ V = S`, `U` ranging over the whole ground set.
    Xor,
}

impl ProductMode {
    /// Whether `(u, v)` belongs to the pair set at `s`.
    pub fn admits(self, s: Mask, u: Mask, v: Mask) -> bool {
        match self {
            ProductMode::Xor => u.symmetric_difference(v) == s,
            ProductMode::Pack => u.is_subset_of(s) && v.is_subset_of(s) && u.intersection(v).is_empty(),
            _ => {
                let covers = u.union(v) == s;
                let meet = u.intersection(v).len();
                covers
                    && match self {
                        ProductMode::Subset => meet == 0,
                        ProductMode::Cover => true,
                        ProductMode::IntersectCover => meet > 0,
                        ProductMode::ExactIntersection(l) => meet == l,
                        ProductMode::Pack | ProductMode::Xor => unreachable!(),
                    }
            }
        }
    }
}

impl fmt::Display for ProductMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductMode::Subset => write!(f, "subset"),
            ProductMode::Cover => write!(f, "cover"),
            ProductMode::Pack => write!(f, "pack"),
            ProductMode::IntersectCover => write!(f, "icover"),
            ProductMode::ExactIntersection(l) => write!(f, "exact:{l}"),
            ProductMode::Xor => write!(f, "xor"),
        }
    }
}

impl FromStr for ProductMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "subset" => ProductMode::Subset,
            "cover" => ProductMode::Cover,
            "pack" => ProductMode::Pack,
            "icover" => ProductMode::IntersectCover,
            "xor" => ProductMode::Xor,
            _ => match s.strip_prefix("exact:").map(str::parse) {
                Some(Ok(l)) => ProductMode::ExactIntersection(l),
                _ => return Err(Error::InvalidArgument(format!("unknown product mode `{s}`"))),
            },
        })
    }
}

/// Rank convolution `c(k, X) = Σ_{j ≤ k} a(j, X) · b(k − j, X)` for
/// `k = 0..=r_max`.
pub fn rank_convolve<R: Ring>(
    ring: &R,
    a: &RankedTable<R::Elem>,
    b: &RankedTable<R::Elem>,
    r_max: usize,
) -> Result<RankedTable<R::Elem>> {
    a.ground().check_same(b.ground())?;
    if r_max > a.r_max() + b.r_max() {
        return Err(Error::RankOutOfRange {
            rank: r_max,
            max: a.r_max() + b.r_max(),
        });
    }
    rank_kernel(ring, a, b, r_max, false)
}

/// With `sparse`, both inputs are known to vanish at ranks above `|X|`
/// (true for ranked zeta transforms) and those terms are skipped.
fn rank_kernel<R: Ring>(
    ring: &R,
    a: &RankedTable<R::Elem>,
    b: &RankedTable<R::Elem>,
    r_max: usize,
    sparse: bool,
) -> Result<RankedTable<R::Elem>> {
    let mut out = RankedTable::zeros(a.ground(), r_max, ring.zero());
    let width = r_max + 1;
    par::try_for_each_row(out.raw_mut(), width, |x, row| {
        let mask = Mask(x as u32);
        let (ra, rb) = (a.row(mask), b.row(mask));
        let (mut top_a, mut top_b) = (a.r_max(), b.r_max());
        if sparse {
            top_a = top_a.min(mask.len());
            top_b = top_b.min(mask.len());
        }
        for (k, acc) in row.iter_mut().enumerate() {
            let lo = k.saturating_sub(top_b);
            let hi = k.min(top_a);
            for j in lo..=hi {
                ring.mul_add_assign(acc, &ra[j], &rb[k - j])?;
            }
        }
        Ok(())
    })?;
    Ok(out)
}

fn check_pair<E>(f: &SetFunction<E>, g: &SetFunction<E>) -> Result<()> {
    f.ground().check_same(g.ground())
}

/// Ranked transforms, rank convolution to rank `n + ell`, ranked inversion
/// and read-out at `(|S| + ell, S)`.
fn ranked_product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
    ell: usize,
) -> Result<SetFunction<R::Elem>> {
    check_pair(f, g)?;
    let n = f.n();
    if ell > n {
        return Err(Error::RankOutOfRange { rank: ell, max: n });
    }
    if let Some(values) = ring.ranked_product_fast(f.values(), g.values(), n, ell) {
        return SetFunction::new(f.ground(), values);
    }
    let a = ranked_zeta(ring, f, n)?;
    let b = ranked_zeta(ring, g, n)?;
    let mut h = rank_kernel(ring, &a, &b, n + ell, true)?;
    drop((a, b));
    let width = h.width();
    transform::mobius_rows(ring, h.raw_mut(), n, width)?;
    let raw = h.raw();
    Ok(SetFunction::from_fn(f.ground(), |s| {
        raw[s.index() * width + s.len() + ell].clone()
    }))
}

/// Subset convolution `(f ∗ g)(S) = Σ_{T⊆S} f(T) g(S∖T)` in
/// `O(n² 2ⁿ)` ring operations.
pub fn subset_convolve<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
) -> Result<SetFunction<R::Elem>> {
    ranked_product(ring, f, g, 0)
}

/// Sum over pairs with `U ∪ V = S` and `|U ∩ V| = ell`.
pub fn exact_intersection_product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
    ell: usize,
) -> Result<SetFunction<R::Elem>> {
    ranked_product(ring, f, g, ell)
}

/// Covering product: Möbius inversion of the pointwise product of the zeta
/// transforms.
pub fn cover_product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
) -> Result<SetFunction<R::Elem>> {
    check_pair(f, g)?;
    let n = f.n();
    let zf = transform::zeta_transform(ring, f)?;
    let mut zg = transform::zeta_transform(ring, g)?;
    let zf_vals = zf.values();
    par::try_for_each_row(zg.values_mut(), 1, |x, v| {
        v[0] = ring.mul(&zf_vals[x], &v[0])?;
        Ok(())
    })?;
    transform::mobius_rows(ring, zg.values_mut(), n, 1)?;
    Ok(zg)
}

/// Packing product, evaluated as `f ∗ g ∗ 1`.
pub fn packing_product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
) -> Result<SetFunction<R::Elem>> {
    let fg = subset_convolve(ring, f, g)?;
    let ones = SetFunction::constant(f.ground(), ring.one());
    subset_convolve(ring, &fg, &ones)
}

/// Intersecting covering product, `f ⊛ g − f ∗ g`.
pub fn intersect_cover_product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
) -> Result<SetFunction<R::Elem>> {
    let mut cover = cover_product(ring, f, g)?;
    let disjoint = subset_convolve(ring, f, g)?;
    ring.sub_slice(cover.values_mut(), disjoint.values())?;
    Ok(cover)
}

/// Symmetric-difference convolution via the Walsh–Hadamard transform.
/// Inexact division in the inverse signals a ring where the result is not
/// integral.
pub fn xor_convolve<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
) -> Result<SetFunction<R::Elem>> {
    check_pair(f, g)?;
    let hf = transform::walsh_hadamard(ring, f, false)?;
    let mut hg = transform::walsh_hadamard(ring, g, false)?;
    for (a, b) in hf.values().iter().zip(hg.values_mut()) {
        *b = ring.mul(a, b)?;
    }
    transform::walsh_hadamard(ring, &hg, true)
}

/// Dispatches on `mode`.
pub fn product<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    g: &SetFunction<R::Elem>,
    mode: ProductMode,
) -> Result<SetFunction<R::Elem>> {
    match mode {
        ProductMode::Subset => subset_convolve(ring, f, g),
        ProductMode::Cover => cover_product(ring, f, g),
        ProductMode::Pack => packing_product(ring, f, g),
        ProductMode::IntersectCover => intersect_cover_product(ring, f, g),
        ProductMode::ExactIntersection(l) => exact_intersection_product(ring, f, g, l),
        ProductMode::Xor => xor_convolve(ring, f, g),
    }
}

/// `k`-fold product of `f` with itself by binary powering; `mode` must be
/// an associative product (`Subset` or `Pack`).
pub fn convolve_power<R: Ring>(
    ring: &R,
    f: &SetFunction<R::Elem>,
    k: usize,
    mode: ProductMode,
) -> Result<SetFunction<R::Elem>> {
    if !matches!(mode, ProductMode::Subset | ProductMode::Pack) {
        return Err(Error::InvalidArgument(format!(
            "convolution powers need an associative product, got {mode}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let mut acc: Option<SetFunction<R::Elem>> = None;
    let mut base = f.clone();
    let mut rest = k;
    loop {
        if rest & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => product(ring, &a, &base, mode)?,
            });
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        base = product(ring, &base, &base, mode)?;
    }
    Ok(acc.expect("k >= 1"))
}
