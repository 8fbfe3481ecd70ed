//! Counter-style derivation of rng streams so results never depend on
//! scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LEVEL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
const SALT_STRIDE: u64 = 0xD1B5_4A32_D192_ED03;

/// Seed for a hierarchy level and purpose. Level 0 with salt 0 is the base seed.
pub(crate) fn derive(seed: u64, level: usize, salt: u64) -> u64 {
    seed.wrapping_add((level as u64).wrapping_mul(LEVEL_STRIDE))
        .wrapping_add(salt.wrapping_mul(SALT_STRIDE))
}

/// Independent generator for item `stream` under `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
