//! Order-independent seed derivation.
//!
//! Every task seed is a pure function of its parent seed and its coordinates,
//! so results do not depend on scheduling or on how many sibling tasks ran.

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a of a string.
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed for a child identified by `parts` under `parent`.
pub fn derive(parent: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(parent), |h, &p| mix64(h ^ mix64(p)))
}

/// Seed of one dataset cell `(label, family, depth)`.
pub fn cell_seed(master: u64, label: u8, family: &str, depth: usize) -> u64 {
    derive(master, &[u64::from(label), hash_str(family), depth as u64])
}

/// Seed of restart `index` within a cell.
pub fn restart_seed(cell: u64, index: usize) -> u64 {
    derive(cell, &[index as u64])
}
