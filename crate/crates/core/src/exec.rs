//! Sequential or rayon-backed execution of independent sample blocks.
//!
//! Work is cut into fixed-size blocks, and block `k` draws from ChaCha
//! stream `k` under the caller's seed. Outputs are merged in block order, so
//! they do not depend on the number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

/// Samples per block.
pub const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `workers = None` uses the global rayon pool.
    Parallel { workers: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { workers: None }
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// `Some(0)` is rejected; `Some(1)` runs sequentially.
    pub fn with_workers(workers: Option<usize>) -> Result<Self> {
        match workers {
            Some(0) => Err(invalid("workers must be at least 1")),
            Some(1) => Ok(Execution::Sequential),
            w => Ok(Execution::Parallel { workers: w }),
        }
    }
}

/// RNG for block `index` under `seed`.
pub fn block_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sizes of the blocks covering `total` items.
pub(crate) fn block_sizes(total: usize) -> Vec<usize> {
    let full = total / BLOCK;
    let mut sizes = vec![BLOCK; full];
    if !total.is_multiple_of(BLOCK) {
        sizes.push(total % BLOCK);
    }
    sizes
}

/// Runs `f(block_index, block_len)` for every block of `total` items and
/// returns the results in block order.
pub(crate) fn run_blocks<T, F>(exec: Execution, total: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync + Send,
{
    let sizes = block_sizes(total);
    match exec {
        Execution::Sequential => Ok(sizes.iter().enumerate().map(|(k, &len)| f(k, len)).collect()),
        Execution::Parallel { workers } => parallel(workers, &sizes, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel<T, F>(workers: Option<usize>, sizes: &[usize], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let job = || sizes.par_iter().enumerate().map(|(k, &len)| f(k, len)).collect();
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel<T, F>(_workers: Option<usize>, sizes: &[usize], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync + Send,
{
    Ok(sizes.iter().enumerate().map(|(k, &len)| f(k, len)).collect())
}
