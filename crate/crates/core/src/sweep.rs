use rayon::prelude::*;

/// Work items at or above this count are searched in parallel.
pub(crate) const PARALLEL_THRESHOLD: usize = 4096;

/// Least index `k < count` with `f(k)` defined, searched in parallel for large
/// ranges. The answer does not depend on scheduling.
pub(crate) fn find_first<W: Send>(count: usize, f: impl Fn(usize) -> Option<W> + Sync + Send) -> Option<W> {
    if count >= PARALLEL_THRESHOLD {
        (0..count).into_par_iter().find_map_first(f)
    } else {
        (0..count).find_map(f)
    }
}
