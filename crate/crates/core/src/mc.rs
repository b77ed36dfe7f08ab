//! Monte-Carlo execution over independent RNG sub-streams.
//!
//! Sampling work is split into a fixed number of sub-streams; stream `i`
//! draws from a ChaCha generator derived from the caller's seed with
//! stream index `i`. Per-stream results merge in index order, so the
//! output for a given seed is bit-identical whether the streams run
//! sequentially or on a rayon pool, and independent of thread count.
//!
//! With the `parallel` feature (default) [`run_streams`] fans out over
//! rayon; without it the same work runs on the calling thread. The
//! explicit [`run_streams_seq`]/[`run_streams_par`] variants exist for
//! the benchmark suite that compares the two.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fixed sub-stream count; part of the deterministic output contract.
pub const DEFAULT_STREAMS: u64 = 64;

/// Generator for one sub-stream of a seeded run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `samples` into per-stream counts (earlier streams take the
/// remainder).
pub fn split_samples(samples: u64, streams: u64) -> Vec<(u64, u64)> {
    let streams = streams.min(samples.max(1));
    let base = samples / streams;
    let extra = samples % streams;
    (0..streams)
        .map(|i| (i, base + u64::from(i < extra)))
        .collect()
}

/// Runs `work(stream_samples, rng)` once per sub-stream; results in
/// stream order.
pub fn run_streams_seq<A, F>(samples: u64, seed: u64, work: F) -> Vec<A>
where
    F: Fn(u64, &mut ChaCha8Rng) -> A + Sync,
    A: Send,
{
    split_samples(samples, DEFAULT_STREAMS)
        .into_iter()
        .map(|(i, n)| work(n, &mut stream_rng(seed, i)))
        .collect()
}

/// Parallel variant of [`run_streams_seq`]; identical output.
#[cfg(feature = "parallel")]
pub fn run_streams_par<A, F>(samples: u64, seed: u64, work: F) -> Vec<A>
where
    F: Fn(u64, &mut ChaCha8Rng) -> A + Sync,
    A: Send,
{
    use rayon::prelude::*;
    split_samples(samples, DEFAULT_STREAMS)
        .into_par_iter()
        .map(|(i, n)| work(n, &mut stream_rng(seed, i)))
        .collect()
}

/// Dispatches to the parallel pool when the `parallel` feature is on,
/// otherwise runs sequentially.
pub fn run_streams<A, F>(samples: u64, seed: u64, work: F) -> Vec<A>
where
    F: Fn(u64, &mut ChaCha8Rng) -> A + Sync,
    A: Send,
{
    #[cfg(feature = "parallel")]
    {
        run_streams_par(samples, seed, work)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_streams_seq(samples, seed, work)
    }
}

/// Mean and standard error accumulated over sub-streams.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    pub sum: f64,
    pub sum_sq: f64,
    pub count: u64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
        self.count += 1;
    }

    /// Merge preserving left-to-right stream order.
    pub fn merge(mut self, other: MeanAccumulator) -> MeanAccumulator {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.count += other.count;
        self
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        let n = self.count as f64;
        let var = (self.sum_sq / n - self.mean() * self.mean()).max(0.0);
        (var / (n - 1.0)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn split_covers_all_samples() {
        for samples in [1u64, 63, 64, 65, 1000, 1_000_000] {
            let parts = split_samples(samples, DEFAULT_STREAMS);
            assert_eq!(parts.iter().map(|&(_, n)| n).sum::<u64>(), samples);
        }
    }

    #[test]
    fn streams_are_distinct() {
        let mut a = stream_rng(9, 0);
        let mut b = stream_rng(9, 1);
        let xs: Vec<f64> = (0..4).map(|_| a.random()).collect();
        let ys: Vec<f64> = (0..4).map(|_| b.random()).collect();
        assert_ne!(xs, ys);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential_bitwise() {
        let work = |n: u64, rng: &mut ChaCha8Rng| {
            let mut acc = MeanAccumulator::default();
            for _ in 0..n {
                acc.push(rng.random::<f64>());
            }
            acc
        };
        let seq = run_streams_seq(100_000, 2024, work)
            .into_iter()
            .fold(MeanAccumulator::default(), MeanAccumulator::merge);
        let par = run_streams_par(100_000, 2024, work)
            .into_iter()
            .fold(MeanAccumulator::default(), MeanAccumulator::merge);
        assert_eq!(seq.sum.to_bits(), par.sum.to_bits());
        assert_eq!(seq.sum_sq.to_bits(), par.sum_sq.to_bits());
        assert_eq!(seq.count, par.count);
    }
}
