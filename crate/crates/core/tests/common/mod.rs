#![allow(dead_code)]

pub mod fp_oracle;
pub mod posit_oracle;
pub mod sim_fuzz;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random binary32 patterns biased toward the interesting regions: uniform
/// bits, moderate exponents, subnormals, near-overflow, specials.
pub fn f32_pattern(rng: &mut impl Rng) -> u32 {
    let sign = (rng.gen::<u32>() & 1) << 31;
    match rng.gen_range(0..16) {
        0..=4 => rng.gen(),
        5..=9 => sign | (rng.gen_range(100u32..155) << 23) | (rng.gen::<u32>() & 0x7F_FFFF),
        10 => sign | (rng.gen::<u32>() & 0x7F_FFFF),
        11 => sign | (rng.gen_range(0u32..8) << 23) | (rng.gen::<u32>() & 0x7F_FFFF),
        12 => sign | (rng.gen_range(246u32..255) << 23) | (rng.gen::<u32>() & 0x7F_FFFF),
        13 => {
            // short significands make exact results and ties likely
            let e = rng.gen_range(110u32..145);
            sign | (e << 23) | ((rng.gen::<u32>() & 0xF) << 19)
        }
        14 => {
            const SPECIAL: [u32; 8] = [
                0, 0x7F80_0000, 0x7FC0_0000, 0x7F80_0001, 0x0000_0001, 0x007F_FFFF,
                0x0080_0000, 0x7F7F_FFFF,
            ];
            sign | SPECIAL[rng.gen_range(0..SPECIAL.len())]
        }
        _ => sign | (127 << 23) | (rng.gen::<u32>() & 0x7F_FFFF),
    }
}

/// A second operand close in magnitude to `a`, to exercise cancellation.
pub fn near(rng: &mut impl Rng, a: u32) -> u32 {
    let delta = rng.gen_range(-64i32..64);
    let b = (a as i32).wrapping_add(delta) as u32;
    if rng.gen() {
        b ^ 0x8000_0000
    } else {
        b
    }
}
pub mod fp_checks;
pub mod posit_checks;
