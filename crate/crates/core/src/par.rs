//! Data-parallel helpers with a sequential fallback.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.
//! Results never depend on the execution strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
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

/// `(0..len).map(f).collect()`, order preserved.
pub fn map_range<R, F>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Folds `items` with their indices into per-worker accumulators and merges
/// them. `merge` must be associative for the result to be partition-free.
pub(crate) fn fold_indexed<T, A, I, F, M>(
    exec: Execution,
    items: &[T],
    identity: I,
    fold: F,
    merge: M,
) -> A
where
    T: Sync,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, usize, &T) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items
            .par_iter()
            .enumerate()
            .fold(&identity, |acc, (i, t)| fold(acc, i, t))
            .reduce(&identity, &merge);
    }
    let _ = (exec, &merge);
    items
        .iter()
        .enumerate()
        .fold(identity(), |acc, (i, t)| fold(acc, i, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let squares = map_range(exec, 10, |i| i * i);
            assert_eq!(squares[9], 81);
            let sum = fold_indexed(exec, &items, || 0u64, |a, i, &t| a + t * i as u64, |a, b| a + b);
            assert_eq!(sum, (0..1000u64).map(|i| i * i).sum::<u64>());
        }
    }
}
