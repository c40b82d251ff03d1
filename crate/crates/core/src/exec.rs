//! Deterministic data-parallel execution.
//!
//! Work is always cut into the same chunks regardless of the worker count and
//! results are merged in chunk order, so every computation is bit-identical for
//! any number of workers.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default number of chunks an enumeration is cut into.
pub const DEFAULT_CHUNKS: usize = 64;

pub struct Executor {
    pool: rayon::ThreadPool,
    workers: usize,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("workers", &self.workers).finish()
    }
}

impl Executor {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidArgument("worker count must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
        Ok(Executor { pool, workers })
    }

    /// Single worker.
    pub fn serial() -> Self {
        Self::new(1).expect("a one-thread pool can always be built")
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Runs `job(i)` for every chunk index and returns the results in index order.
    pub fn map_chunks<T, F>(&self, chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..chunks).into_par_iter().map(&job).collect())
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::serial()
    }
}

/// Enumeration cost guard: refuses instead of truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Budget {
    pub const DEFAULT: Budget = Budget(1_000_000_000);

    pub fn check(self, needed: u128) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded { needed, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// q^e as a saturating u128 (used for budget arithmetic).
pub fn pow_sat(q: u32, e: u32) -> u128 {
    (q as u128).checked_pow(e).unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_results_in_order_for_any_worker_count() {
        for w in [1, 2, 8] {
            let ex = Executor::new(w).unwrap();
            let v = ex.map_chunks(17, |i| i * i);
            assert_eq!(v, (0..17).map(|i| i * i).collect::<Vec<_>>());
        }
        assert!(Executor::new(0).is_err());
    }

    #[test]
    fn budget_refuses() {
        assert!(Budget(10).check(10).is_ok());
        assert_eq!(Budget(10).check(11), Err(Error::BudgetExceeded { needed: 11, cap: 10 }));
    }
}
