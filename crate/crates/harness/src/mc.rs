//! The replication engine: splittable per-replication random streams and
//! an order-deterministic parallel map.
//!
//! Stream derivation uses the cipher's native stream facility: every
//! `(master seed, stream index)` pair selects an independent keystream of
//! the same key, so replications never share randomness and any
//! replication can be reproduced in isolation. Experiments lay out their
//! streams as `replication × components + component`, where a component
//! is one logical consumer (chain draws, price draws, one strategy's
//! draws, ...). Keeping components on separate streams is what allows
//! common-random-number comparisons: consumers can be added or removed
//! without shifting anyone else's draws.
//!
//! Results are collected into a vector indexed by replication and reduced
//! sequentially, so aggregates are bit-identical for a fixed
//! `(seed, replications)` whatever the thread count or scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::HarnessError;

/// The RNG for one logical stream of a run.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Runs `replications` independent tasks on a dedicated thread pool and
/// returns their results in replication order. The closure receives the
/// replication index and must derive all randomness from it.
pub fn run_replications<T, F>(
    replications: u64,
    threads: usize,
    task: F,
) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(|| (0..replications).into_par_iter().map(task).collect()))
}

/// As [`run_replications`], but for tasks that can fail; the first error
/// in replication order is returned.
pub fn try_run_replications<T, E, F>(
    replications: u64,
    threads: usize,
    task: F,
) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    E: Into<HarnessError> + Send,
    F: Fn(u64) -> Result<T, E> + Sync + Send,
{
    let results = run_replications(replications, threads, task)?;
    results
        .into_iter()
        .map(|r| r.map_err(Into::into))
        .collect()
}
