//! Counter-based RNG streams: every Monte Carlo unit (trial, census block,
//! lattice sample) owns a ChaCha8 stream derived from `(master_seed,
//! point_index, unit_index)`, so results are independent of scheduling and
//! worker count. Unit indices are limited to 2^40 per grid point.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const POINT_SHIFT: u32 = 40;

/// Stream for one Monte Carlo unit of one grid point.
pub fn unit_rng(master_seed: u64, point_index: usize, unit_index: u64) -> ChaCha8Rng {
    assert!(
        unit_index < 1 << POINT_SHIFT,
        "unit index overflows stream id"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point_index as u64) << POINT_SHIFT) | unit_index);
    rng
}
