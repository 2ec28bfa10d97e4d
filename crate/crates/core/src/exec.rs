//! Parallel map helper with a sequential fallback.
//!
//! The heavy inner loop of the classifier rewrites thousands of independent
//! Gamma(M) generators over a shared generator set; with the `parallel`
//! feature (default) the batch runs on rayon, otherwise sequentially.
//! Both entry points are public so benchmarks can compare them directly.

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
pub fn map_batch<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of `map_batch`, independent of feature flags.
pub fn map_batch_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
