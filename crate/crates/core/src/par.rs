//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`ExecutionMode::Parallel`]
//! runs on the rayon pool; without it every mode degrades to a plain loop.
//! Output order never depends on the mode.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    #[default]
    Parallel,
    Sequential,
}

static MODE: AtomicU8 = AtomicU8::new(0);

/// Process-wide mode used by [`map`]. Benchmarks flip this to compare.
pub fn set_mode(mode: ExecutionMode) {
    MODE.store(
        match mode {
            ExecutionMode::Parallel => 0,
            ExecutionMode::Sequential => 1,
        },
        Ordering::Relaxed,
    );
}

pub fn mode() -> ExecutionMode {
    match MODE.load(Ordering::Relaxed) {
        0 => ExecutionMode::Parallel,
        _ => ExecutionMode::Sequential,
    }
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == ExecutionMode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Order-preserving fallible map; the first error (in input order) wins.
pub fn try_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(items, f).into_iter().collect()
}
