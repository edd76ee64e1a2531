use serde::{Deserialize, Serialize};

use crate::rng::{derive_seed, hash_str};

/// Image-level split. Training images are given; the held-out pool is
/// divided into validation and test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
    pub seed: u64,
}

/// Share of the held-out pool assigned to validation.
pub const VAL_FRACTION: f64 = 0.7;

/// Orders the held-out pool by a seeded hash of each image id, so the
/// result does not depend on input order, and cuts it 70/30.
pub fn split(train: &[String], held_out: &[String], seed: u64) -> SplitSpec {
    let mut train: Vec<String> = train.to_vec();
    train.sort();
    train.dedup();
    let mut pool: Vec<String> = held_out.iter().filter(|id| train.binary_search(id).is_err()).cloned().collect();
    pool.sort();
    pool.dedup();
    pool.sort_by_key(|id| (derive_seed(&[seed, hash_str(id)]), id.clone()));
    let n_val = (pool.len() as f64 * VAL_FRACTION).round() as usize;
    let test = pool.split_off(n_val);
    SplitSpec { train, val: pool, test, seed }
}
