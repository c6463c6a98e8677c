//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the work is spread over the rayon pool when
//! the caller asks for it; without the feature every call runs in order on
//! the current thread. Results never depend on the mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `0..len` and concatenates the outputs in index order.
pub(crate) fn flat_map_ordered<T, F>(len: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Vec<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..len).into_par_iter().flat_map_iter(f).collect();
    }
    let _ = parallel;
    (0..len).flat_map(f).collect()
}

/// Maps `0..len` in index order.
pub(crate) fn map_ordered<T, F>(len: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..len).map(f).collect()
}

/// The result for the smallest index whose closure returns `Some`.
pub(crate) fn find_first<T, F>(len: usize, parallel: bool, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..len).into_par_iter().find_map_first(f);
    }
    let _ = parallel;
    (0..len).find_map(f)
}

/// Minimum of the per-index results.
pub(crate) fn min_over<T, F>(len: usize, parallel: bool, f: F) -> Option<T>
where
    T: Send + Ord,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..len).into_par_iter().filter_map(f).min();
    }
    let _ = parallel;
    (0..len).filter_map(f).min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for parallel in [false, true] {
            assert_eq!(flat_map_ordered(4, parallel, |i| vec![i; i]), vec![1, 2, 2, 3, 3, 3]);
            assert_eq!(map_ordered(3, parallel, |i| i * 2), vec![0, 2, 4]);
            assert_eq!(find_first(100, parallel, |i| (i % 7 == 6).then_some(i)), Some(6));
            assert_eq!(min_over(10, parallel, |i| (i > 3).then_some(10 - i)), Some(1));
        }
    }
}
