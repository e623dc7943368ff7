//! Negative sampling: corrupted tails for contrastive training.
//!
//! For a positive triple `(h, r, t)`, a negative example keeps `h` and `r`
//! and replaces the tail with `k` **distinct** entities drawn uniformly from
//! the vocabulary minus `{t}`. Only the current true tail is excluded; other
//! tails known for `(h, r)` may legitimately be drawn, as is standard for
//! uniform corruption.
//!
//! Sampling is deterministic and order-independent: every draw gets its own
//! RNG seeded from `(base seed, draw index)` through a SplitMix64-style
//! mixer, so a given `(seed, epoch, triple)` always yields the same tails no
//! matter how batches are scheduled or parallelized.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Triple;
use crate::{Error, Result};

/// How corrupted tails are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingStrategy {
    /// Uniform over all entities except the current true tail.
    UniformTail,
}

/// A negative-sampling policy: how many tails per positive, how to draw
/// them, and the base seed of the draw stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeSpec {
    /// Number of distinct corrupted tails per positive (`k ≥ 1`).
    pub k: usize,
    pub strategy: SamplingStrategy,
    /// Base seed for per-draw RNG derivation.
    pub seed: u64,
}

impl NegativeSpec {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            strategy: SamplingStrategy::UniformTail,
            seed,
        }
    }

    /// Checks `k ≥ 1` and that the vocabulary can supply `k` distinct tails
    /// besides the excluded one.
    pub fn validate(&self, n_entities: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig(
                "negative sample count k must be at least 1".into(),
            ));
        }
        if n_entities < self.k + 1 {
            return Err(Error::VocabularyTooSmall {
                k: self.k,
                n_entities,
                required: self.k + 1,
            });
        }
        Ok(())
    }
}

/// SplitMix64 finalizer: decorrelates consecutive draw indexes into
/// independent-looking sub-seeds.
fn mix_seed(seed: u64, draw_index: u64) -> u64 {
    let mut z = seed ^ draw_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `k` distinct tails uniformly from `{0 … n_entities−1} \ {excluded_tail}`
/// using the supplied RNG.
///
/// The draw happens over a compacted range of `n_entities − 1` candidates;
/// indexes at or above the excluded tail are shifted up by one, so every
/// non-excluded entity is selected with equal probability.
pub fn sample_negative_tails<R: rand::Rng + ?Sized>(
    n_entities: usize,
    excluded_tail: usize,
    k: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    NegativeSpec::new(k, 0).validate(n_entities)?;
    if excluded_tail >= n_entities {
        return Err(Error::EntityIdOutOfRange {
            id: excluded_tail,
            n_entities,
        });
    }
    let picks = rand::seq::index::sample(rng, n_entities - 1, k);
    Ok(picks
        .iter()
        .map(|c| if c >= excluded_tail { c + 1 } else { c })
        .collect())
}

/// Deterministic negatives for one positive at one draw position.
///
/// `draw_index` identifies the draw within the whole training run (for
/// example `epoch · n_train + triple_index`); combined with `spec.seed` it
/// pins the result exactly.
pub fn negative_tails_for_draw(
    n_entities: usize,
    positive: &Triple,
    spec: &NegativeSpec,
    draw_index: u64,
) -> Result<Vec<usize>> {
    spec.validate(n_entities)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(spec.seed, draw_index));
    match spec.strategy {
        SamplingStrategy::UniformTail => {
            sample_negative_tails(n_entities, positive.tail, spec.k, &mut rng)
        }
    }
}
