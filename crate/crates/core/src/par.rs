//! Data-parallel iteration that degrades to plain iterators without the
//! `parallel` feature.

use std::sync::atomic::{AtomicUsize, Ordering};

static JOBS: AtomicUsize = AtomicUsize::new(0);

/// Worker count used by the internal kernels: 0 means the whole rayon
/// pool, 1 forces the sequential path.
pub fn jobs() -> usize {
    JOBS.load(Ordering::Relaxed)
}

pub fn set_jobs(n: usize) {
    JOBS.store(n, Ordering::Relaxed);
}

#[cfg(feature = "parallel")]
fn pool(n: usize) -> Option<std::sync::Arc<rayon::ThreadPool>> {
    use std::sync::{Arc, Mutex};
    static POOL: Mutex<Option<(usize, Arc<rayon::ThreadPool>)>> = Mutex::new(None);
    let mut g = POOL.lock().ok()?;
    if let Some((k, p)) = g.as_ref() {
        if *k == n {
            return Some(p.clone());
        }
    }
    let p = Arc::new(rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()?);
    *g = Some((n, p.clone()));
    Some(p)
}

/// Map `f` over `items`, on the rayon pool when `jobs != 1` and the
/// `parallel` feature is on, otherwise in order on the calling thread.
pub fn map_jobs<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if jobs != 1 && items.len() > 1 {
            if jobs == 0 || rayon::current_num_threads() == jobs {
                return items.into_par_iter().map(f).collect();
            }
            if let Some(pool) = pool(jobs) {
                return pool.install(|| items.into_par_iter().map(&f).collect());
            }
        }
    }
    let _ = jobs;
    items.into_iter().map(f).collect()
}

/// [`map_jobs`] with the global worker setting.
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    map_jobs(items, jobs(), f)
}
