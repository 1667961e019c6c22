//! Machine-word kernel for ranked products over `i64`.
//!
//! Arithmetic is carried out modulo `2^w` for a lane word of `w` bits.
//! Reduction mod `2^w` is a ring homomorphism from the integers, so the
//! result is exact whenever the true output is known to lie in the signed
//! `w`-bit range; callers establish that bound and pick the word.
//!
//! A mask splits into four lane bits and a tile index. A tile stores, for
//! each rank, the 16 values of its masks side by side, so every inner loop
//! works on fixed-width arrays. Tile indices split again into `high` and
//! `low` bits. Passes over low tile bits run inside contiguous blocks of
//! tiles. Passes over high tile bits, the rank convolution and the high
//! inversion passes run per column group (one low tile index under every
//! high part), gathered into a contiguous scratch buffer.
//!
//! Only ranks that can influence the read-out are stored. For a tile whose
//! index has popcount `h`, its masks have popcounts in `h..=h + 4`, so
//! transform ranks stop at `h + 4` and output ranks start at `h + ell`.
//! The output of each tile overwrites the first operand's transform.

use crate::par;

const LANE_BITS: usize = 4;
const LANES: usize = 1 << LANE_BITS;
/// Number of high tile-index bits handled by the column-group phase.
const HIGH_BITS: usize = 7;

type Lane<W> = [W; LANES];

/// An unsigned machine word with wrapping arithmetic.
pub(crate) trait Word: Copy + Default + Send + Sync + 'static {
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn wrap(v: i64) -> Self;
    /// Sign-extending read-back.
    fn signed(self) -> i64;
}

macro_rules! word {
    ($u:ty, $i:ty) => {
        impl Word for $u {
            #[inline(always)]
            fn add(self, o: Self) -> Self {
                self.wrapping_add(o)
            }
            #[inline(always)]
            fn sub(self, o: Self) -> Self {
                self.wrapping_sub(o)
            }
            #[inline(always)]
            fn mul(self, o: Self) -> Self {
                self.wrapping_mul(o)
            }
            fn wrap(v: i64) -> Self {
                v as $u
            }
            fn signed(self) -> i64 {
                self as $i as i64
            }
        }
    };
}

word!(u32, i32);
word!(u64, i64);

/// Smallest ground set handled here; smaller instances use the generic path.
pub(crate) const MIN_N: usize = LANE_BITS;

struct Shape {
    n: usize,
    ell: usize,
    low: usize,
    high: usize,
}

impl Shape {
    fn new(n: usize, ell: usize) -> Self {
        let tile_bits = n - LANE_BITS;
        let high = tile_bits.min(HIGH_BITS);
        Shape {
            n,
            ell,
            low: tile_bits - high,
            high,
        }
    }

    /// Largest transform rank stored for tile `t`.
    fn top(&self, t: usize) -> usize {
        self.n.min(t.count_ones() as usize + LANE_BITS)
    }

    fn in_len(&self, t: usize) -> usize {
        self.top(t) + 1
    }

    /// Output tile `t` holds ranks `|t| + ell ..= n + ell`.
    fn out_len(&self, t: usize) -> usize {
        self.n - t.count_ones() as usize + 1
    }

    fn len(&self, t: usize) -> usize {
        self.in_len(t).max(self.out_len(t))
    }
}

/// Compact table: tile `t` occupies `data[offsets[t]..offsets[t + 1]]`.
struct Table<W> {
    offsets: Vec<usize>,
    data: Vec<Lane<W>>,
}

impl<W: Word> Table<W> {
    fn new(tiles: usize, len: impl Fn(usize) -> usize) -> Self {
        let offsets = prefix_sums(0..tiles, len);
        let data = vec![[W::default(); LANES]; offsets[tiles]];
        Table { offsets, data }
    }

    fn tile(&self, t: usize) -> &[Lane<W>] {
        &self.data[self.offsets[t]..self.offsets[t + 1]]
    }

    /// Splits the tiles into consecutive runs of `tiles` tiles.
    fn runs(&mut self, tiles: usize) -> Vec<&mut [Lane<W>]> {
        let mut out = Vec::with_capacity((self.offsets.len() - 1) / tiles);
        let mut rest: &mut [Lane<W>] = &mut self.data;
        for t in (tiles..self.offsets.len()).step_by(tiles) {
            let len = self.offsets[t] - self.offsets[t - tiles];
            let (run, tail) = std::mem::take(&mut rest).split_at_mut(len);
            out.push(run);
            rest = tail;
        }
        out
    }
}

fn prefix_sums(range: std::ops::Range<usize>, len: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(range.len() + 1);
    let mut at = 0;
    out.push(0);
    for t in range {
        at += len(t);
        out.push(at);
    }
    out
}

#[inline(always)]
fn add_into<W: Word>(hi: &mut [Lane<W>], lo: &[Lane<W>]) {
    for (h, l) in hi.iter_mut().zip(lo) {
        for i in 0..LANES {
            h[i] = h[i].add(l[i]);
        }
    }
}

#[inline(always)]
fn sub_into<W: Word>(hi: &mut [Lane<W>], lo: &[Lane<W>]) {
    for (h, l) in hi.iter_mut().zip(lo) {
        for i in 0..LANES {
            h[i] = h[i].sub(l[i]);
        }
    }
}

#[inline(always)]
fn lane_zeta<W: Word>(v: &mut Lane<W>) {
    for b in 0..LANE_BITS {
        let bit = 1 << b;
        for i in 0..LANES {
            if i & bit != 0 {
                v[i] = v[i].add(v[i ^ bit]);
            }
        }
    }
}

#[inline(always)]
fn lane_mobius<W: Word>(v: &mut Lane<W>) {
    for b in 0..LANE_BITS {
        let bit = 1 << b;
        for i in 0..LANES {
            if i & bit != 0 {
                v[i] = v[i].sub(v[i ^ bit]);
            }
        }
    }
}

/// Tile `lo` and a mutable tile `hi > lo` of a compact block.
#[inline(always)]
fn pair<'a, W>(
    block: &'a mut [Lane<W>],
    offsets: &[usize],
    lo: usize,
    hi: usize,
) -> (&'a [Lane<W>], &'a mut [Lane<W>]) {
    let (left, right) = block.split_at_mut(offsets[hi]);
    (
        &left[offsets[lo]..offsets[lo + 1]],
        &mut right[..offsets[hi + 1] - offsets[hi]],
    )
}

/// Lane<W> transform and zeta passes over the low tile bits of one block.
#[inline(always)]
fn zeta_low<W: Word>(block: &mut [Lane<W>], base: usize, shape: &Shape) {
    let offsets = prefix_sums(base..base + (1 << shape.low), |t| shape.len(t));
    for t in 0..1usize << shape.low {
        let len = shape.in_len(base + t);
        block[offsets[t]..offsets[t] + len].iter_mut().for_each(lane_zeta);
    }
    for j in 0..shape.low {
        let half = 1usize << j;
        for start in (0..1usize << shape.low).step_by(2 * half) {
            for t in start..start + half {
                let (lo, hi) = pair(block, &offsets, t, t + half);
                let n = shape.in_len(base + t);
                add_into(&mut hi[..n], &lo[..n]);
            }
        }
    }
}

/// Möbius passes over the low tile bits and the lanes of one output block.
/// Tile `t` holds ranks from `|t| + ell`, so `hi[i]` pairs with `lo[i + 1]`.
#[inline(always)]
fn mobius_low<W: Word>(block: &mut [Lane<W>], base: usize, shape: &Shape) {
    let offsets = prefix_sums(base..base + (1 << shape.low), |t| shape.len(t));
    for j in 0..shape.low {
        let half = 1usize << j;
        for start in (0..1usize << shape.low).step_by(2 * half) {
            for t in start..start + half {
                let (lo, hi) = pair(block, &offsets, t, t + half);
                let n = shape.out_len(base + t);
                sub_into(&mut hi[..n - 1], &lo[1..n]);
            }
        }
    }
    for t in 0..1usize << shape.low {
        let n = shape.out_len(base + t);
        block[offsets[t]..offsets[t] + n].iter_mut().for_each(lane_mobius);
    }
}

impl<W> Default for Scratch<W> {
    fn default() -> Self {
        Scratch {
            a: Vec::new(),
            b: Vec::new(),
            o: Vec::new(),
        }
    }
}

/// Per-worker buffers for one column group, tiles `n + ell + 1` ranks wide.
struct Scratch<W> {
    a: Vec<Lane<W>>,
    b: Vec<Lane<W>>,
    o: Vec<Lane<W>>,
}

/// High passes, convolution and high inversion for one column group.
/// `tiles[h]` is tile `(h << low) | low_index` of the first operand and
/// receives the output tile.
#[inline(always)]
fn column_group<W: Word>(
    b: &Table<W>,
    tiles: &mut [&mut [Lane<W>]],
    low_index: usize,
    shape: &Shape,
    scratch: &mut Scratch<W>,
) {
    let (n, ell) = (shape.n, shape.ell);
    let w = n + ell + 1;
    let highs = 1usize << shape.high;
    let tile = |h: usize| (h << shape.low) | low_index;

    let Scratch { a: sa, b: sb, o: so } = scratch;
    for buf in [&mut *sa, &mut *sb, &mut *so] {
        if buf.len() < highs * w {
            buf.resize(highs * w, [W::default(); LANES]);
        }
    }
    for h in 0..highs {
        let len = shape.in_len(tile(h));
        sa[h * w..h * w + len].copy_from_slice(&tiles[h][..len]);
        sb[h * w..h * w + len].copy_from_slice(&b.tile(tile(h))[..len]);
    }

    for j in 0..shape.high {
        let bit = 1usize << j;
        for h in (0..highs).filter(|h| h & bit == 0) {
            let len = shape.in_len(tile(h));
            for buf in [&mut *sa, &mut *sb] {
                let (lo, hi) = buf.split_at_mut((h | bit) * w);
                add_into(&mut hi[..len], &lo[h * w..h * w + len]);
            }
        }
    }

    // Output tiles in scratch are indexed by rank offset from |t| + ell.
    for h in 0..highs {
        let t = tile(h);
        let (p, top) = (t.count_ones() as usize, shape.top(t));
        let ra = &sa[h * w..h * w + top + 1];
        let rb = &sb[h * w..h * w + top + 1];
        let ro = &mut so[h * w..h * w + shape.out_len(t)];
        for (i, acc) in ro.iter_mut().enumerate() {
            let k = p + ell + i;
            *acc = [W::default(); LANES];
            if k > 2 * top {
                continue;
            }
            let (lo, hi) = (k.saturating_sub(top), k.min(top));
            for (x, y) in ra[lo..=hi].iter().zip(rb[k - hi..=k - lo].iter().rev()) {
                for l in 0..LANES {
                    acc[l] = acc[l].add(x[l].mul(y[l]));
                }
            }
        }
    }

    for j in 0..shape.high {
        let bit = 1usize << j;
        for h in (0..highs).filter(|h| h & bit == 0) {
            let len = shape.out_len(tile(h));
            let (lo, hi) = so.split_at_mut((h | bit) * w);
            sub_into(&mut hi[..len - 1], &lo[h * w + 1..h * w + len]);
        }
    }

    for (h, dst) in tiles.iter_mut().enumerate() {
        let len = shape.out_len(tile(h));
        dst[..len].copy_from_slice(&so[h * w..h * w + len]);
    }
}

/// The phases of one product, compiled once per instruction-set level.
macro_rules! phases {
    ($(#[$attr:meta])* $name:ident) => {
        mod $name {
            use super::*;

            $(#[$attr])*
            pub(super) fn zeta<W: Word>(block: &mut [Lane<W>], base: usize, shape: &Shape) {
                zeta_low(block, base, shape)
            }

            $(#[$attr])*
            pub(super) fn mobius<W: Word>(block: &mut [Lane<W>], base: usize, shape: &Shape) {
                mobius_low(block, base, shape)
            }

            $(#[$attr])*
            pub(super) fn group<W: Word>(b: &Table<W>, tiles: &mut [&mut [Lane<W>]], low_index: usize, shape: &Shape, scratch: &mut Scratch<W>) {
                column_group(b, tiles, low_index, shape, scratch)
            }
        }
    };
}

phases!(generic);
#[cfg(target_arch = "x86_64")]
phases!(
    #[target_feature(enable = "avx512f,avx512dq,avx512vl")]
    wide
);

#[derive(Clone, Copy)]
enum Isa {
    Generic,
    #[cfg(target_arch = "x86_64")]
    Wide,
}

impl Isa {
    fn detect() -> Self {
        #[cfg(target_arch = "x86_64")]
        if is_x86_feature_detected!("avx512f")
            && is_x86_feature_detected!("avx512dq")
            && is_x86_feature_detected!("avx512vl")
        {
            return Isa::Wide;
        }
        Isa::Generic
    }

    fn zeta<W: Word>(self, block: &mut [Lane<W>], base: usize, shape: &Shape) {
        match self {
            Isa::Generic => generic::zeta(block, base, shape),
            // SAFETY: `Wide` is only selected after detecting the features.
            #[cfg(target_arch = "x86_64")]
            Isa::Wide => unsafe { wide::zeta(block, base, shape) },
        }
    }

    fn mobius<W: Word>(self, block: &mut [Lane<W>], base: usize, shape: &Shape) {
        match self {
            Isa::Generic => generic::mobius(block, base, shape),
            // SAFETY: as above.
            #[cfg(target_arch = "x86_64")]
            Isa::Wide => unsafe { wide::mobius(block, base, shape) },
        }
    }

    fn group<W: Word>(
        self,
        b: &Table<W>,
        tiles: &mut [&mut [Lane<W>]],
        low_index: usize,
        shape: &Shape,
        scratch: &mut Scratch<W>,
    ) {
        match self {
            Isa::Generic => generic::group(b, tiles, low_index, shape, scratch),
            // SAFETY: as above.
            #[cfg(target_arch = "x86_64")]
            Isa::Wide => unsafe { wide::group(b, tiles, low_index, shape, scratch) },
        }
    }
}

/// `S ↦ Σ_{U∪V=S, |U∩V|=ell} f(U) g(V)` computed modulo `2^w`.
/// Requires `n >= MIN_N`.
pub(crate) fn ranked_product<W: Word>(f: &[i64], g: &[i64], n: usize, ell: usize) -> Vec<i64> {
    assert!(n >= MIN_N);
    let isa = Isa::detect();
    let shape = Shape::new(n, ell);
    let tiles = 1usize << (n - LANE_BITS);
    let block = 1usize << shape.low;

    let transform = |src: &[i64]| {
        let mut t = Table::new(tiles, |i| shape.len(i));
        for (x, &v) in src.iter().enumerate() {
            t.data[t.offsets[x >> LANE_BITS] + x.count_ones() as usize][x & (LANES - 1)] = W::wrap(v);
        }
        let blocks: Vec<_> = t.runs(block).into_iter().enumerate().collect();
        par::consume_with(blocks, || (), |_, (i, run)| isa.zeta(run, i * block, &shape));
        t
    };
    let mut a: Table<W> = transform(f);
    let b = transform(g);

    let mut groups: Vec<Vec<&mut [Lane<W>]>> = (0..block).map(|_| Vec::with_capacity(1 << shape.high)).collect();
    for (i, run) in a.runs(1).into_iter().enumerate() {
        groups[i % block].push(run);
    }
    let work: Vec<_> = groups.into_iter().enumerate().collect();
    par::consume_with(work, Scratch::default, |scratch, (i, mut run)| {
        isa.group(&b, &mut run, i, &shape, scratch)
    });
    drop(b);

    let blocks: Vec<_> = a.runs(block).into_iter().enumerate().collect();
    par::consume_with(blocks, || (), |_, (i, run)| isa.mobius(run, i * block, &shape));

    let mut out = vec![0i64; 1 << n];
    for (t, chunk) in out.chunks_mut(LANES).enumerate() {
        let tile = a.tile(t);
        for (lane, v) in chunk.iter_mut().enumerate() {
            *v = tile[lane.count_ones() as usize][lane].signed();
        }
    }
    out
}

/// Largest `|v|` in `values`.
pub(crate) fn max_abs(values: &[i64]) -> u128 {
    values.iter().map(|v| v.unsigned_abs() as u128).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::GroundSet;
    use crate::oracle::direct_product;
    use crate::products::ProductMode;
    use crate::ring::CheckedWord;
    use crate::setfn::SetFunction;

    // Sizes straddling the low/high split.
    #[test]
    fn matches_oracle_across_split() {
        for n in [4usize, 5, 11, 12, 13] {
            let gs = GroundSet::new(n).unwrap();
            let f = SetFunction::from_fn(gs, |m| (m.bits() as i64 * 37) % 19 - 9);
            let g = SetFunction::from_fn(gs, |m| (m.bits() as i64 * 53) % 23 - 11);
            for ell in [0usize, 1, 3] {
                let want = direct_product(&CheckedWord, &f, &g, ProductMode::ExactIntersection(ell)).unwrap();
                assert_eq!(
                    ranked_product::<u64>(f.values(), g.values(), n, ell),
                    want.values(),
                    "n={n} ell={ell}"
                );
                assert_eq!(
                    ranked_product::<u32>(f.values(), g.values(), n, ell),
                    want.values(),
                    "n={n} ell={ell}"
                );
            }
        }
    }
}
