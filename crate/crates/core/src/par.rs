//! Order-stable parallel reductions.
//!
//! Partial sums are formed over fixed index chunks and combined sequentially,
//! so results are bitwise identical for any worker count.

use rayon::prelude::*;

const CHUNK: usize = 4096;

pub fn ordered_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(n);
            (c * CHUNK..end).map(&f).sum()
        })
        .collect();
    partial.iter().sum()
}

/// Element-wise sum of vectors produced per index, combined in index order
/// within fixed chunks.
pub fn ordered_vec_sum<T, F>(n: usize, len: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Copy + Default + Send + Sync + std::ops::AddAssign,
    F: Fn(usize, &mut [T]) + Sync,
{
    let chunk = chunk.max(1);
    let chunks = n.div_ceil(chunk);
    let partial: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![T::default(); len];
            for i in c * chunk..((c + 1) * chunk).min(n) {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut out = vec![T::default(); len];
    for p in partial {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}
