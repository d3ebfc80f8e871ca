//! Seeded random families for property suites and CLI spot checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::all_ksets;
use crate::family::Family;

pub type FamilyRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> FamilyRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a density uniformly from [0, 1], then keeps each k-subset of `[n]`
/// independently with that probability. Small `binom(n, k)` only.
pub fn random_family<R: Rng>(rng: &mut R, n: u32, k: u32) -> Family {
    let density: f64 = rng.gen();
    let bits = all_ksets(n, k)
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect();
    Family::from_unique_bits(n, k, bits)
}

/// Uniform family of exactly `size` members (clamped to `binom(n, k)`).
pub fn random_family_of_size<R: Rng>(rng: &mut R, n: u32, k: u32, size: usize) -> Family {
    let all = all_ksets(n, k);
    let size = size.min(all.len());
    let bits = rand::seq::index::sample(rng, all.len(), size)
        .into_iter()
        .map(|i| all[i])
        .collect();
    Family::from_unique_bits(n, k, bits)
}
