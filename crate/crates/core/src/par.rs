//! Data-parallel helpers with a sequential fallback.
//!
//! Every batch routine in the crate takes an [`Execution`] and funnels its
//! inner loop through [`map`] or [`chunked_sum`]. Results are collected in
//! input order and reductions are done sequentially over fixed-size chunk
//! partials, so the parallel and sequential paths return bit-identical
//! values regardless of the thread count.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] silently runs
//! sequentially.

/// How a batch workload is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Chunk length used by [`chunked_sum`]. Fixed so the reduction tree does not
/// depend on the scheduler.
pub const SUM_CHUNK: usize = 1024;

/// Applies `f` to every item, preserving order.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Applies `f` to every index in `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Sums `f(x)` over `items` with a deterministic reduction order.
///
/// Each chunk of [`SUM_CHUNK`] items is summed with Neumaier compensation,
/// then the chunk partials are combined left to right.
pub fn chunked_sum<T, F>(items: &[T], exec: Execution, f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    let chunks: Vec<&[T]> = items.chunks(SUM_CHUNK).collect();
    let partials = map(&chunks, exec, |chunk| crate::series::neumaier_sum(chunk.iter().map(&f)));
    crate::series::neumaier_sum(partials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_sums_are_identical() {
        let xs: Vec<f64> = (1..20_000).map(|i| 1.0 / (i as f64).powf(1.3)).collect();
        let s = chunked_sum(&xs, Execution::Sequential, |x| x.ln_1p());
        let p = chunked_sum(&xs, Execution::Parallel, |x| x.ln_1p());
        assert_eq!(s.to_bits(), p.to_bits());
    }

    #[test]
    fn map_preserves_order() {
        let v = map_range(1000, Execution::Parallel, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 2 * i));
    }
}
