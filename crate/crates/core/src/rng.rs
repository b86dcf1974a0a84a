//! Random sources and seed derivation.
//!
//! Every randomized routine draws through [`UnitSource`], which lets tests
//! replay scripted uniforms. Seeded runs use ChaCha8 streams.
//!
//! Child seeds come from [`derive_seed`]: each of `(master, a, b)` is folded
//! in turn through the SplitMix64 finalizer,
//! `mix(mix(mix(master) ^ a) ^ b)`. Trial `i` of a run with master seed `s`
//! uses `derive_seed(s, i, 0)`; class `c` at one recursion level of the
//! general algorithm uses `derive_seed(level_seed, CLASS_STREAM, c)`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source of independent uniforms in `[0, 1)`.
pub trait UnitSource {
    fn next_unit(&mut self) -> f64;
}

impl<R: RngCore> UnitSource for R {
    fn next_unit(&mut self) -> f64 {
        self.gen::<f64>()
    }
}

/// Replays a fixed list of uniforms, panicking once it runs dry.
#[derive(Debug, Clone)]
pub struct Scripted {
    values: Vec<f64>,
    pos: usize,
}

impl Scripted {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(
            values.iter().all(|u| (0.0..1.0).contains(u)),
            "scripted uniforms must lie in [0, 1)"
        );
        Scripted { values, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl UnitSource for Scripted {
    fn next_unit(&mut self) -> f64 {
        let u = *self
            .values
            .get(self.pos)
            .expect("scripted uniform source exhausted");
        self.pos += 1;
        u
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ a) ^ b)
}

/// Stream tags used as the `a` argument of [`derive_seed`].
pub const CLASS_STREAM: u64 = 0xC1A5_5000;
pub const RECURSION_STREAM: u64 = 0x4EC0_0000;
pub const SAMPLE_STREAM: u64 = 0x5A3F_0000;

/// Exponential variate with the given mean, by inversion: `-mean * ln(1 - U)`.
pub fn exponential(src: &mut impl UnitSource, mean: f64) -> f64 {
    -mean * (1.0 - src.next_unit()).ln()
}
