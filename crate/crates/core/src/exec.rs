//! Parallel/sequential execution of independent per-index work.
//!
//! Grid rows, per-`n` Cramer solves, and corpus sweeps are all "map an index
//! range through a pure function" jobs. `map_range` runs them on rayon when the
//! `parallel` feature is enabled and sequentially otherwise; results always come
//! back in index order, so reports are deterministic either way.
//! `map_range_seq` stays available unconditionally for the benchmarks that
//! compare the two paths.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every index in `range`, in parallel when the `parallel`
/// feature is enabled. Output order matches index order.
#[cfg(feature = "parallel")]
pub fn map_range<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

/// Applies `f` to every index in `range`, in parallel when the `parallel`
/// feature is enabled. Output order matches index order.
#[cfg(not(feature = "parallel"))]
pub fn map_range<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    range.map(f).collect()
}

/// Always-sequential twin of [`map_range`].
pub fn map_range_seq<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    range.map(f).collect()
}

/// Maps `f` over a slice, in parallel when enabled; order-preserving.
#[cfg(feature = "parallel")]
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over a slice, in parallel when enabled; order-preserving.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Always-sequential twin of [`map_slice`].
pub fn map_slice_seq<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    F: Fn(&I) -> T,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let squares = map_range(0..100, |i| i * i);
        assert_eq!(squares, map_range_seq(0..100, |i| i * i));
        let v = [3usize, 1, 4, 1, 5];
        assert_eq!(map_slice(&v, |x| x + 1), map_slice_seq(&v, |x| x + 1));
    }
}
