//! Data-parallel helpers. With the `parallel` feature (default) these run
//! on the rayon pool; without it they fall back to plain iterators so the
//! call sites compile unchanged.

#[cfg(feature = "parallel")]
mod imp {
    use rayon::prelude::*;

    pub fn map_slice<T: Sync, U: Send, F>(xs: &[T], f: F) -> Vec<U>
    where
        F: Fn(&T) -> U + Sync + Send,
    {
        xs.par_iter().map(f).collect()
    }

    pub fn map_indexed<T: Sync, U: Send, F>(xs: &[T], f: F) -> Vec<U>
    where
        F: Fn(usize, &T) -> U + Sync + Send,
    {
        xs.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
    }

    pub fn fold_reduce<T: Sync, A: Send, I, F, R>(xs: &[T], identity: I, fold: F, reduce: R) -> A
    where
        I: Fn() -> A + Sync + Send,
        F: Fn(A, &T) -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        xs.par_iter().fold(&identity, &fold).reduce(&identity, &reduce)
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub fn map_slice<T, U, F>(xs: &[T], f: F) -> Vec<U>
    where
        F: Fn(&T) -> U,
    {
        xs.iter().map(f).collect()
    }

    pub fn map_indexed<T, U, F>(xs: &[T], f: F) -> Vec<U>
    where
        F: Fn(usize, &T) -> U,
    {
        xs.iter().enumerate().map(|(i, x)| f(i, x)).collect()
    }

    pub fn fold_reduce<T, A, I, F, R>(xs: &[T], identity: I, fold: F, _reduce: R) -> A
    where
        I: Fn() -> A,
        F: Fn(A, &T) -> A,
        R: Fn(A, A) -> A,
    {
        xs.iter().fold(identity(), fold)
    }
}

pub(crate) use imp::{fold_reduce, map_indexed, map_slice};
