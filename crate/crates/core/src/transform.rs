//! Zeta (Möbius) transform, Möbius inversion, their ranked forms and the
//! Walsh–Hadamard transform.
//!
//! All transforms run `n` in-place passes over a working copy, bit `0`
//! first. Pass `j` touches every pair `(X, X ∪ {j+1})` with `j+1 ∉ X`.

use crate::error::{Error, Result};
use crate::mask::{GroundSet, Mask};
use crate::par;
use crate::ring::Ring;
use crate::setfn::SetFunction;

/// The table `(k, X) ↦ f̂(k, X)` for ranks `0..=r_max`.
///
/// Stored mask-major: the `r_max + 1` rank entries of each mask are
/// contiguous, so a transform pass moves whole rank rows at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedTable<E> {
    ground: GroundSet,
    r_max: usize,
    values: Vec<E>,
}

impl<E: Clone> RankedTable<E> {
    pub fn zeros(ground: GroundSet, r_max: usize, zero: E) -> Self {
        RankedTable {
            ground,
            r_max,
            values: vec![zero; ground.size() * (r_max + 1)],
        }
    }

    /// Builds a table from per-rank slices, slice `k` holding `2^n` values.
    pub fn from_slices(ground: GroundSet, slices: Vec<Vec<E>>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::InvalidArgument("a ranked table needs at least one slice".into()));
        }
        let width = slices.len();
        let size = ground.size();
        if let Some(bad) = slices.iter().find(|s| s.len() != size) {
            return Err(Error::LengthMismatch {
                expected: size,
                actual: bad.len(),
            });
        }
        let mut values = Vec::with_capacity(size * width);
        for x in 0..size {
            for slice in &slices {
                values.push(slice[x].clone());
            }
        }
        Ok(RankedTable {
            ground,
            r_max: width - 1,
            values,
        })
    }

    /// Slice `k` as a dense sequence over masks.
    pub fn slice(&self, k: usize) -> Vec<E> {
        assert!(k <= self.r_max, "rank {k} above r_max {}", self.r_max);
        self.values.iter().skip(k).step_by(self.r_max + 1).cloned().collect()
    }
}

impl<E> RankedTable<E> {
    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn r_max(&self) -> usize {
        self.r_max
    }

    #[inline]
    pub(crate) fn width(&self) -> usize {
        self.r_max + 1
    }

    #[inline]
    pub fn get(&self, k: usize, x: Mask) -> &E {
        debug_assert!(k <= self.r_max);
        &self.values[x.index() * self.width() + k]
    }

    /// All ranks at mask `x`.
    #[inline]
    pub fn row(&self, x: Mask) -> &[E] {
        let w = self.width();
        &self.values[x.index() * w..(x.index() + 1) * w]
    }

    pub(crate) fn raw(&self) -> &[E] {
        &self.values
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [E] {
        &mut self.values
    }
}

/// `n` zeta passes over a mask-major table with `width` entries per mask.
pub(crate) fn zeta_rows<R: Ring>(ring: &R, data: &mut [R::Elem], n: usize, width: usize) -> Result<()> {
    for j in 0..n {
        par::try_pairwise(data, (1 << j) * width, |lo, hi| ring.add_slice(hi, lo))?;
    }
    Ok(())
}

pub(crate) fn mobius_rows<R: Ring>(ring: &R, data: &mut [R::Elem], n: usize, width: usize) -> Result<()> {
    for j in 0..n {
        par::try_pairwise(data, (1 << j) * width, |lo, hi| ring.sub_slice(hi, lo))?;
    }
    Ok(())
}

pub(crate) fn hadamard_rows<R: Ring>(ring: &R, data: &mut [R::Elem], n: usize) -> Result<()> {
    for j in 0..n {
        par::try_pairwise(data, 1 << j, |lo, hi| ring.butterfly(lo, hi))?;
    }
    Ok(())
}

/// `X ↦ Σ_{S⊆X} f(S)`, using exactly `n·2^{n-1}` ring additions.
pub fn zeta_transform<R: Ring>(ring: &R, f: &SetFunction<R::Elem>) -> Result<SetFunction<R::Elem>> {
    let mut out = f.clone();
    zeta_rows(ring, out.values_mut(), f.n(), 1)?;
    Ok(out)
}

/// `S ↦ Σ_{X⊆S} (-1)^{|S∖X|} g(X)`, the inverse of [`zeta_transform`].
pub fn mobius_inversion<R: Ring>(ring: &R, g: &SetFunction<R::Elem>) -> Result<SetFunction<R::Elem>> {
    let mut out = g.clone();
    mobius_rows(ring, out.values_mut(), g.n(), 1)?;
    Ok(out)
}

/// Slice `k` is the zeta transform of `f` restricted to rank-`k` sets.
/// Ranks above `n` are allowed (up to `2n`) and stay zero.
pub fn ranked_zeta<R: Ring>(ring: &R, f: &SetFunction<R::Elem>, r_max: usize) -> Result<RankedTable<R::Elem>> {
    let n = f.n();
    if r_max > 2 * n {
        return Err(Error::RankOutOfRange {
            rank: r_max,
            max: 2 * n,
        });
    }
    let mut table = RankedTable::zeros(f.ground(), r_max, ring.zero());
    let width = table.width();
    for (x, v) in f.iter() {
        let k = x.len();
        if k <= r_max {
            table.values[x.index() * width + k] = v.clone();
        }
    }
    zeta_rows(ring, &mut table.values, n, width)?;
    Ok(table)
}

/// Möbius-inverts every rank slice. For a table produced by
/// [`ranked_zeta`], the entry `(|S|, S)` of the result is `f(S)`.
pub fn ranked_mobius<R: Ring>(ring: &R, table: &RankedTable<R::Elem>) -> Result<RankedTable<R::Elem>> {
    let mut out = table.clone();
    let (n, width) = (table.ground.n(), table.width());
    mobius_rows(ring, &mut out.values, n, width)?;
    Ok(out)
}

/// Forward: `X ↦ Σ_S (-1)^{|X∩S|} f(S)`. Inverse: the forward transform
/// followed by exact division by `2^n`.
pub fn walsh_hadamard<R: Ring>(ring: &R, f: &SetFunction<R::Elem>, inverse: bool) -> Result<SetFunction<R::Elem>> {
    let mut out = f.clone();
    let n = f.n();
    hadamard_rows(ring, out.values_mut(), n)?;
    if inverse && n > 0 {
        let divisor = 1u64 << n;
        for v in out.values_mut() {
            *v = ring.div_exact(v, divisor)?;
        }
    }
    Ok(out)
}
