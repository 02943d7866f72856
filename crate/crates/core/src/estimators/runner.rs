use crate::error::Result;
use crate::rng::{RngStream, StreamFactory};

/// Runs `m` replications, replication `i` drawing from `streams.stream(i)`.
///
/// Output is in replication order and does not depend on `threads`.
/// `S` is per-worker scratch space.
pub fn replicate<S, T, F>(m: u64, streams: &StreamFactory, threads: usize, f: F) -> Result<Vec<T>>
where
    S: Default + Send,
    T: Send,
    F: Fn(&mut S, &mut RngStream) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::error::Error::Config(format!("thread pool: {e}")))?;
        return pool.install(|| {
            (0..m)
                .into_par_iter()
                .map_init(S::default, |scratch, i| f(scratch, &mut streams.stream(i)))
                .collect()
        });
    }
    let _ = threads;
    let mut scratch = S::default();
    (0..m)
        .map(|i| f(&mut scratch, &mut streams.stream(i)))
        .collect()
}

/// Wall-clock timer that reads zero where the platform has no clock.
pub(crate) struct Stopwatch(#[allow(dead_code)] Option<std::time::Instant>);

impl Stopwatch {
    pub(crate) fn start() -> Self {
        #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
        return Stopwatch(None);
        #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
        return Stopwatch(Some(std::time::Instant::now()));
    }

    pub(crate) fn elapsed(&self) -> std::time::Duration {
        self.0.map(|t| t.elapsed()).unwrap_or_default()
    }
}
