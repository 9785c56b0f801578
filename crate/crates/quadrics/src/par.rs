//! Data-parallel inner-loop helpers with a sequential fallback.
//!
//! Every helper is deterministic: parallel runs produce the same values in
//! the same order as the sequential fallback, so reports are byte-identical
//! regardless of thread count. Heavy kernels expose explicit `*_seq`
//! variants for the benches that compare both schedules.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, preserving index order in the output.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_range`]; kept unconditionally for benches.
pub fn map_range_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Finds the value produced by the smallest index for which `f` returns
/// `Some`. Parallel execution still returns the first match in index
/// order, so the result is schedule-independent.
pub fn find_map_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// Sequential twin of [`find_map_first`].
pub fn find_map_first_seq<T, F>(n: usize, f: F) -> Option<T>
where
    F: Fn(usize) -> Option<T>,
{
    (0..n).find_map(f)
}

/// True when any index in `0..n` satisfies `f`.
pub fn any_range<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().any(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).any(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v = map_range(100, |i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn find_first_is_schedule_independent() {
        // Many matches; the smallest index must win.
        let hit = find_map_first(10_000, |i| if i % 7 == 3 { Some(i) } else { None });
        assert_eq!(hit, Some(3));
    }
}
