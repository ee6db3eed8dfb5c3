//! Data-parallel execution helpers.
//!
//! The heavy operations in this crate (Wigner rows, phase-diagram cells,
//! sweep points, ensemble draws) all map an index range to independent
//! outputs. With the `parallel` feature (on by default) these maps run on
//! the rayon pool; without it they run sequentially. The `*_seq` variants
//! always run sequentially so benchmarks and parity tests can compare the
//! two paths in one build.
//!
//! Results are collected in index order, so a map is bit-identical no matter
//! how many threads execute it.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Like [`map_indexed`] but hands each worker a scratch value built by
/// `init`, for maps that reuse FFT buffers.
#[cfg(feature = "parallel")]
pub fn map_indexed_init<S, T, I, F>(n: usize, init: I, f: F) -> Vec<T>
where
    S: Send,
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map_init(&init, |s, i| f(s, i))
        .collect()
}

/// Like [`map_indexed`] but hands each worker a scratch value built by
/// `init`, for maps that reuse FFT buffers.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed_init<S, T, I, F>(n: usize, init: I, f: F) -> Vec<T>
where
    S: Send,
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    let mut s = init();
    (0..n).map(|i| f(&mut s, i)).collect()
}

/// Sequential reference path for [`map_indexed`].
pub fn map_indexed_seq<T, F: FnMut(usize) -> T>(n: usize, mut f: F) -> Vec<T> {
    (0..n).map(|i| f(i)).collect()
}

/// Sequential reference path for [`map_indexed_init`].
pub fn map_indexed_init_seq<S, T, I, F>(n: usize, init: I, mut f: F) -> Vec<T>
where
    I: FnOnce() -> S,
    F: FnMut(&mut S, usize) -> T,
{
    let mut s = init();
    (0..n).map(|i| f(&mut s, i)).collect()
}

/// Cap the rayon pool at `n` threads. Must be called before any parallel
/// work; later calls fail once the global pool exists.
#[cfg(feature = "parallel")]
pub fn set_threads(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Without the `parallel` feature there is no pool to configure; a request
/// for one thread is trivially satisfied, anything else is refused.
#[cfg(not(feature = "parallel"))]
pub fn set_threads(n: usize) -> std::result::Result<(), String> {
    if n == 1 {
        Ok(())
    } else {
        Err("built without the `parallel` feature; only --threads 1 available".into())
    }
}
