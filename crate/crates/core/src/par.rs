//! Data-parallel fan-out over independent trials.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it, [`Execution::Parallel`] quietly runs sequentially. Results are
//! returned in index order in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_indices<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}

/// Parallel map over a slice, preserving order.
pub fn map_slice<S, T, F>(exec: Execution, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| i * i + 1;
        assert_eq!(
            map_indices(Execution::Sequential, 1000, f),
            map_indices(Execution::Parallel, 1000, f)
        );
        let xs: Vec<u32> = (0..50).collect();
        assert_eq!(
            map_slice(Execution::Sequential, &xs, |x| x * 2),
            map_slice(Execution::Parallel, &xs, |x| x * 2)
        );
    }
}
