//! Seed derivation and Gaussian draws.
//!
//! Every random quantity in the crate is drawn from a ChaCha stream keyed by a
//! master seed and a path of indices (setting, replicate, draw, ...). Work items
//! therefore never share a generator, and results do not depend on how the
//! items are scheduled across threads.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for work item `index` under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Seed obtained by walking `path` from `seed`.
pub fn derive_path(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |s, &i| derive_seed(s, i))
}

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Draw from N(0, sd^2 I).
pub fn normal_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, sd: f64) -> DVector<f64> {
    let mut v = standard_normal_vector(rng, n);
    v *= sd;
    v
}
