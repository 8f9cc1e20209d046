//! Data-parallel evaluation of independent grid points.
//!
//! With the `parallel` feature (on by default) the maps run on rayon;
//! without it they fall back to plain sequential iteration. Both paths
//! preserve input order, so results are deterministic either way.

#[cfg(feature = "parallel")]
pub(crate) fn try_map<T, R, F>(items: &[T], f: F) -> crate::error::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> crate::error::Result<R> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<T, R, F>(items: &[T], f: F) -> crate::error::Result<Vec<R>>
where
    F: Fn(&T) -> crate::error::Result<R>,
{
    items.iter().map(f).collect()
}

/// Caps the global worker count. Returns an error message when the pool
/// was already initialized with a different size.
#[cfg(feature = "parallel")]
pub fn set_thread_cap(n: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
