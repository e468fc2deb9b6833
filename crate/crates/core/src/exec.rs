//! Execution mode for the data-parallel inner loops.
//!
//! With the `parallel` feature (on by default) the kernels fan out over rayon's
//! global pool. Without it, or with [`ExecMode::Sequential`], they run on the
//! calling thread. Both paths return results in index order, so output never
//! depends on the mode.

use std::sync::atomic::{AtomicU8, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How index-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

const SEQ: u8 = 0;
const PAR: u8 = 1;

static MODE: AtomicU8 = AtomicU8::new(if cfg!(feature = "parallel") { PAR } else { SEQ });

/// Loops shorter than this stay sequential even in parallel mode.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 256;

impl ExecMode {
    /// The process-wide mode used by the kernels.
    pub fn current() -> ExecMode {
        match MODE.load(Ordering::Relaxed) {
            PAR if cfg!(feature = "parallel") => ExecMode::Parallel,
            _ => ExecMode::Sequential,
        }
    }

    /// Sets the process-wide mode. Requesting `Parallel` without the
    /// `parallel` feature is accepted and behaves as `Sequential`.
    pub fn set(mode: ExecMode) {
        MODE.store(
            match mode {
                ExecMode::Sequential => SEQ,
                ExecMode::Parallel => PAR,
            },
            Ordering::Relaxed,
        );
    }

    #[cfg(feature = "parallel")]
    fn fans_out(self, len: usize) -> bool {
        self == ExecMode::Parallel && len >= PAR_THRESHOLD
    }
}

/// Runs `f` with the process-wide mode temporarily set to `mode`.
pub fn with_mode<R>(mode: ExecMode, f: impl FnOnce() -> R) -> R {
    let prev = ExecMode::current();
    ExecMode::set(mode);
    let out = f();
    ExecMode::set(prev);
    out
}

/// `(0..len).map(f).collect()`, fanned out when the mode allows.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if ExecMode::current().fans_out(len) {
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

/// Fills `out[i] = f(i)` for every index.
pub fn fill_indexed<T, F>(out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if ExecMode::current().fans_out(out.len()) {
        out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
        return;
    }
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}

/// Indices in `0..len` satisfying `pred`, in increasing order.
pub fn filter_range<F>(len: usize, pred: F) -> Vec<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if ExecMode::current().fans_out(len) {
        return (0..len).into_par_iter().filter(|&i| pred(i)).collect();
    }
    (0..len).filter(|&i| pred(i)).collect()
}
