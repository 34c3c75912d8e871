//! Deterministic seed derivation.
//!
//! Everything random in this crate flows from a single 64-bit master seed.
//! Sub-seeds for independent units of work (a realization, a simulation run,
//! a sampled source set) are derived by folding a tag path into the master
//! seed with splitmix64, so any single unit can be re-derived and re-run in
//! isolation: `derive_seed(master, &[purpose, row, realization, cell])`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; a well-mixed 64-bit permutation.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives a sub-seed from `master` and a tag path.
///
/// Each tag is absorbed in order, so `derive_seed(m, &[a, b])` and
/// `derive_seed(m, &[b, a])` differ. The empty path returns a mix of the
/// master seed itself.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &tag in tags {
        state = splitmix64(state ^ splitmix64(tag));
    }
    state
}

/// Deterministic RNG for a derived seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
