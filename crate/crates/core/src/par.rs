//! Branch- and trial-level parallelism.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it, or with [`Workers::Sequential`], the same closures run in a
//! plain loop. Results are always returned in index order.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Workers {
    Sequential,
    /// rayon's global pool.
    #[default]
    Auto,
    Threads(usize),
}

impl Workers {
    pub fn from_count(count: Option<usize>) -> Self {
        match count {
            None | Some(0) => Workers::Auto,
            Some(1) => Workers::Sequential,
            Some(t) => Workers::Threads(t),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Workers::Sequential
    }
}

/// `f(0), f(1), …, f(count - 1)`, in order.
pub fn map_indices<T, F>(count: u64, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if workers.is_parallel() {
            return install(workers, || (0..count).into_par_iter().map(&f).collect());
        }
    }
    let _ = workers;
    (0..count).map(f).collect()
}

/// The smallest index whose closure returns `Some`, together with its value.
pub fn find_first<T, F>(count: u64, workers: Workers, f: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if workers.is_parallel() {
            return install(workers, || {
                (0..count)
                    .into_par_iter()
                    .find_map_first(|i| f(i).map(|v| (i, v)))
            });
        }
    }
    let _ = workers;
    (0..count).find_map(|i| f(i).map(|v| (i, v)))
}

#[cfg(feature = "parallel")]
fn install<R: Send>(workers: Workers, op: impl FnOnce() -> R + Send) -> R {
    match workers {
        Workers::Threads(t) if t > 0 => {
            match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool.install(op),
                Err(_) => op(),
            }
        }
        _ => op(),
    }
}
