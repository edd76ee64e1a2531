//! Seed derivation and the generator used by every stochastic routine.
//!
//! Seeds are derived with a fixed mixing function so that a dataset seed plus
//! a sample's identity reproduce the same bytes on any machine and thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Counter-based generator (ChaCha8 keystream).
pub type DigRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DigRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over the bytes of a label, for mixing string identifiers into seeds.
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Order-sensitive combination of seed components.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6a09_e667_f3bc_c908u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Per-gesture seed from the dataset seed and the gesture's identity.
pub fn gesture_seed(dataset_seed: u64, image_id: &str, region_id: &str, gesture: &str, attempt: u64) -> u64 {
    derive_seed(&[
        dataset_seed,
        hash_str(image_id),
        hash_str(region_id),
        hash_str(gesture),
        attempt,
    ])
}
