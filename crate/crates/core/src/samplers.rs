//! Reproducible random streams and exact samplers for the reference laws.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};

/// A seeded random stream.
///
/// Streams with the same `(seed, stream_id)` produce the same sequence.
/// Distinct stream ids select disjoint ChaCha keystreams under one key, so
/// parallel workers can each own one without coordinating.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

/// Opens stream `stream_id` of the generator keyed by `seed`.
pub fn spawn_stream(seed: u64, stream_id: u64) -> RandomSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    RandomSource {
        seed,
        stream_id,
        rng,
    }
}

impl RandomSource {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw from the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        self.rng.sample(Open01)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// Inverse CDF of the standard Cauchy law.
pub fn cauchy_quantile(u: f64) -> f64 {
    (PI * (u - 0.5)).tan()
}

/// Inverse CDF of the hyperbolic secant law with density `½·sech(πy/2)`,
/// `(2/π)·ln tan(πu/2)`.
pub fn sech_quantile(u: f64) -> f64 {
    let centred = u - 0.5;
    if centred.abs() < 0.25 {
        // Same function as (4/π)·artanh(tan(π(u − ½)/2)); exact at u = ½.
        2.0 * FRAC_2_PI * (FRAC_PI_2 * centred).tan().atanh()
    } else if u < 0.5 {
        FRAC_2_PI * (FRAC_PI_2 * u).tan().ln()
    } else {
        -FRAC_2_PI * (FRAC_PI_2 * (1.0 - u)).tan().ln()
    }
}

/// One standard Cauchy variate.
pub fn sample_cauchy(rng: &mut RandomSource) -> f64 {
    cauchy_quantile(rng.uniform_open())
}

/// One variate with density `½·sech(πy/2)`.
pub fn sample_sech(rng: &mut RandomSource) -> f64 {
    sech_quantile(rng.uniform_open())
}
