//! Splitting a Monte Carlo workload across independent random streams.

use rayon::prelude::*;

use crate::samplers::{spawn_stream, RandomSource};

/// Number of draws assigned to each of `workers` streams for `n` draws in
/// total. The first `n % workers` streams take one extra draw.
pub fn partition(n: usize, workers: usize) -> Vec<usize> {
    let workers = workers.max(1);
    (0..workers)
        .map(|k| n / workers + usize::from(k < n % workers))
        .collect()
}

/// Identifies the streams `first, first + 1, …, first + workers − 1` of the
/// generator keyed by `seed`. Batches that must be independent of each other
/// use non-overlapping ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    pub seed: u64,
    pub first: u64,
    pub workers: usize,
}

impl Streams {
    pub fn new(seed: u64, workers: usize) -> Self {
        Streams {
            seed,
            first: 0,
            workers: workers.max(1),
        }
    }

    /// The `index`-th batch: streams starting at `index · 2³²`.
    pub fn batch(self, index: u32) -> Self {
        Streams {
            first: u64::from(index) << 32,
            ..self
        }
    }
}

/// Runs `work(stream, count)` once per stream and returns the results in
/// stream-id order, whatever order the threads finish in.
pub fn run_streams<T, F>(streams: Streams, n: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RandomSource, usize) -> T + Sync,
{
    partition(n, streams.workers)
        .into_par_iter()
        .enumerate()
        .map(|(k, count)| work(&mut spawn_stream(streams.seed, streams.first + k as u64), count))
        .collect()
}

/// Draws `n` values with `draw`, split over the streams, concatenated in
/// stream order. The first error in stream order wins.
pub fn collect_draws<T, E, F>(streams: Streams, n: usize, draw: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut RandomSource) -> Result<T, E> + Sync,
{
    let chunks = run_streams(streams, n, |rng, count| {
        (0..count).map(|_| draw(rng)).collect::<Result<Vec<T>, E>>()
    });
    let mut out = Vec::with_capacity(n);
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}
