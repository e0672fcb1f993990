//! Order-preserving map over a slice, parallel when the feature is on.
//! Callers must pass order-insensitive or per-index work only; results come
//! back in input order in both builds, so output is identical either way.

#[cfg(feature = "parallel")]
pub fn maybe_par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(|t| f(t)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn maybe_par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
