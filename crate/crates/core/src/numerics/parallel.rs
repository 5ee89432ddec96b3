//! Worker pool shared by the sweeps; sized from `WIGNER_LAB_THREADS`.

use rayon::prelude::*;
use std::sync::OnceLock;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "WIGNER_LAB_THREADS";

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// Parses a thread cap; `None` for absent or invalid values.
pub fn parse_thread_cap(raw: Option<&str>) -> Option<usize> {
    raw.and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0)
}

/// Worker count: the env cap if set, otherwise the available parallelism.
pub fn worker_count() -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match parse_thread_cap(std::env::var(THREADS_ENV).ok().as_deref()) {
        Some(cap) => cap.min(avail.max(1)).max(1),
        None => avail,
    }
}

fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(worker_count())
            .thread_name(|i| format!("wigner-lab-{i}"))
            .build()
            .expect("thread pool")
    })
}

/// Order-preserving parallel map. Each item is computed independently, so
/// the output does not depend on the number of workers.
pub fn par_map<I, R, F>(items: &[I], f: F) -> Vec<R>
where
    I: Sync,
    R: Send,
    F: Fn(&I) -> R + Sync + Send,
{
    pool().install(|| items.par_iter().map(&f).collect())
}
