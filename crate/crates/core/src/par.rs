//! Map-reduce over batches of items, on the rayon pool when the `rayon`
//! feature is enabled and sequentially otherwise.

/// Worker-pool sizing for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Global rayon pool (all available cores).
    #[default]
    Auto,
    /// Dedicated pool with this many threads; `Threads(1)` runs inline.
    Threads(usize),
    Sequential,
}

impl Parallelism {
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            None | Some(0) => Parallelism::Auto,
            Some(1) => Parallelism::Sequential,
            Some(k) => Parallelism::Threads(k),
        }
    }

    fn is_sequential(self) -> bool {
        cfg!(not(feature = "rayon")) || matches!(self, Parallelism::Sequential | Parallelism::Threads(1))
    }
}

#[cfg(feature = "rayon")]
const BATCH: usize = 2048;

/// Maps every item and folds the results with an associative `merge`.
///
/// Items are pulled from `source` in batches so the producer stays
/// single-threaded and memory stays bounded. `merge` must be associative
/// and commutative for the result to be independent of scheduling.
pub fn map_reduce<I, T, A, Id, M, R>(
    source: I,
    parallelism: Parallelism,
    identity: Id,
    map: M,
    merge: R,
) -> A
where
    I: IntoIterator<Item = T>,
    T: Send,
    A: Send,
    Id: Fn() -> A + Sync + Send,
    M: Fn(T) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    if parallelism.is_sequential() {
        return source
            .into_iter()
            .fold(identity(), |acc, item| merge(acc, map(item)));
    }
    #[cfg(feature = "rayon")]
    {
        let pool = match parallelism {
            Parallelism::Threads(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build().ok(),
            _ => None,
        };
        parallel_batches(source, pool.as_ref(), &identity, &map, &merge)
    }
    #[cfg(not(feature = "rayon"))]
    unreachable!("sequential path handles builds without rayon")
}

#[cfg(feature = "rayon")]
fn parallel_batches<I, T, A, Id, M, R>(
    source: I,
    pool: Option<&rayon::ThreadPool>,
    identity: &Id,
    map: &M,
    merge: &R,
) -> A
where
    I: IntoIterator<Item = T>,
    T: Send,
    A: Send,
    Id: Fn() -> A + Sync + Send,
    M: Fn(T) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    use rayon::prelude::*;

    let mut iter = source.into_iter();
    let mut acc = identity();
    loop {
        let batch: Vec<T> = iter.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return acc;
        }
        let run = || batch.into_par_iter().map(map).reduce(identity, merge);
        let part = match pool {
            Some(pool) => pool.install(run),
            None => run(),
        };
        acc = merge(acc, part);
    }
}
