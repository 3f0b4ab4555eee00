//! Data-parallel helpers.  With the `parallel` feature the dispatching
//! functions fan out over rayon; without it they fall back to a sequential
//! loop.  Results preserve input order either way, keeping every caller
//! deterministic; the bench suite compares the two paths by building with
//! and without the feature.

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice_seq<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_slice_seq(items, f)
}
