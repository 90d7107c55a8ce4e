//! Deterministic seed derivation for independent tasks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used for every seeded stream in the crate.
pub type TaskRng = ChaCha8Rng;

/// Mixes a master seed with a task index (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for task `index` under `master`.
pub fn task_rng(master: u64, index: u64) -> TaskRng {
    TaskRng::seed_from_u64(derive_seed(master, index))
}
