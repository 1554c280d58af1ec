//! Execution backend. With the `parallel` feature (default) work items run on
//! the rayon pool; without it they run in order on the calling thread. Both
//! produce identical results because every work item is a pure function of
//! its index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f(0), f(1), ..., f(count - 1)`, collected in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Apply `f` to consecutive `chunk`-sized pieces of `data` (the last may be
/// shorter), passing the chunk index.
#[cfg(feature = "parallel")]
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    data.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Ascending sort under `f64::total_cmp`. The result does not depend on the
/// backend since equal keys are bit-identical.
pub fn sort_f64(values: &mut [f64]) {
    #[cfg(feature = "parallel")]
    values.par_sort_unstable_by(f64::total_cmp);
    #[cfg(not(feature = "parallel"))]
    values.sort_unstable_by(f64::total_cmp);
}

/// True when work is dispatched to a thread pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
