use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "FITSCAPE_THREADS";

pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0)
}

/// Evaluates `job(i)` for `i in 0..n` on a worker pool and returns the
/// results in index order, so output never depends on scheduling.
pub fn map_replicates<T, F>(n: u64, job: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> CliResult<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&job).collect())
}
