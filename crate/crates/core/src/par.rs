//! Data-parallel helpers: rayon-backed when the default `parallel` feature
//! is enabled, with a sequential fallback otherwise and a runtime override
//! (used by the benchmark suite to compare both code paths in one build).

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Forces the sequential code path even when the `parallel` feature is on.
pub fn set_sequential(force: bool) {
    FORCE_SEQUENTIAL.store(force, Ordering::SeqCst);
}

/// Caps worker parallelism at `n` threads (no-op once a pool exists or when
/// the `parallel` feature is off); `n == 0` leaves the default.
pub fn configure_threads(n: usize) {
    #[cfg(feature = "parallel")]
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::SeqCst)
}

/// Maps `f` over the items, in parallel when enabled; output order matches
/// input order either way, so results are deterministic.
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
    }
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_on_both_paths() {
        let v: Vec<i64> = (0..100).collect();
        let par = par_map(v.clone(), |x| x * x);
        set_sequential(true);
        let seq = par_map(v, |x| x * x);
        set_sequential(false);
        assert_eq!(par, seq);
        assert_eq!(par[10], 100);
    }
}
