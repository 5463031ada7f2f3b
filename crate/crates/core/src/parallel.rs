//! Replicate-level parallelism.
//!
//! With the `parallel` feature (default) independent tasks run on a rayon
//! pool; without it every strategy falls back to a sequential loop. Results
//! are always returned in task-index order, so any reduction over them is
//! independent of the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ABM_EVI_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// `None` uses the global rayon pool.
    Threads(Option<usize>),
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism::Threads(None)
    }
}

impl Parallelism {
    pub fn threads(n: usize) -> Self {
        if n <= 1 {
            Parallelism::Sequential
        } else {
            Parallelism::Threads(Some(n))
        }
    }

    /// Reads [`THREADS_ENV`]; unset or unparsable means machine parallelism.
    pub fn from_env() -> Self {
        match std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
        {
            Some(0) | None => Parallelism::Threads(None),
            Some(n) => Parallelism::threads(n),
        }
    }
}

/// `(0..count).map(task)` collected in index order.
pub fn map_indexed<T, F>(parallelism: Parallelism, count: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match parallelism {
        Parallelism::Sequential => (0..count).map(task).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Threads(None) => (0..count).into_par_iter().map(task).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Threads(Some(n)) => {
            match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&task).collect()),
                Err(_) => (0..count).map(task).collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Parallelism::Threads(_) => (0..count).map(task).collect(),
    }
}
