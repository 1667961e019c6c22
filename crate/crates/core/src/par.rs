//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without
//! it they are plain sequential loops. Kernels are written against these
//! helpers only, and every output element is produced by the same sequence
//! of exact operations whatever the schedule, so both builds return
//! identical results.

use crate::error::Result;

/// Work below this many elements stays on the calling thread.
pub const PAR_THRESHOLD: usize = 1 << 12;

/// Splits `data` into consecutive blocks of `2 * half` elements and calls
/// `f(lo, hi)` on the two halves of every block; large halves are further
/// cut into aligned pieces.
pub fn try_pairwise<T, F>(data: &mut [T], half: usize, f: F) -> Result<()>
where
    T: Send,
    F: Fn(&mut [T], &mut [T]) -> Result<()> + Sync + Send,
{
    let block = 2 * half;
    #[cfg(feature = "parallel")]
    {
        if data.len() >= PAR_THRESHOLD {
            use rayon::prelude::*;
            if half >= PAR_THRESHOLD {
                return data.par_chunks_mut(block).try_for_each(|c| {
                    let (lo, hi) = c.split_at_mut(half);
                    lo.par_chunks_mut(PAR_THRESHOLD)
                        .zip(hi.par_chunks_mut(PAR_THRESHOLD))
                        .try_for_each(|(l, h)| f(l, h))
                });
            }
            return data
                .par_chunks_mut(block)
                .with_min_len((PAR_THRESHOLD / block).max(1))
                .try_for_each(|c| {
                    let (lo, hi) = c.split_at_mut(half);
                    f(lo, hi)
                });
        }
    }
    data.chunks_mut(block).try_for_each(|c| {
        let (lo, hi) = c.split_at_mut(half);
        f(lo, hi)
    })
}

/// Calls `f(row_index, row)` for each row of `width` elements.
pub fn try_for_each_row<T, F>(data: &mut [T], width: usize, f: F) -> Result<()>
where
    T: Send,
    F: Fn(usize, &mut [T]) -> Result<()> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if data.len() >= PAR_THRESHOLD {
            use rayon::prelude::*;
            return data
                .par_chunks_mut(width)
                .enumerate()
                .with_min_len((PAR_THRESHOLD / width).max(1))
                .try_for_each(|(i, row)| f(i, row));
        }
    }
    data.chunks_mut(width).enumerate().try_for_each(|(i, row)| f(i, row))
}

/// Maps `f` over `0..len`, collecting results in index order.
pub fn try_map_range<T, F>(len: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    (0..len).map(f).collect()
}

/// Infallible [`try_map_range`].
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    (0..len).map(f).collect()
}

/// Caps the global worker pool. Returns `false` without the `parallel`
/// feature or when the pool was already initialised.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

/// Runs `op` on a dedicated pool of `threads` workers (sequentially when the
/// `parallel` feature is off). Used by the benches to compare schedules.
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        op()
    }
}

pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Runs `f` on every item of `items` with a per-worker state from `init`.
pub fn consume_with<T, S, I, F>(items: Vec<T>, init: I, f: F)
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().for_each_init(init, |s, t| f(s, t));
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut state = init();
        items.into_iter().for_each(|t| f(&mut state, t))
    }
}
