//! Seed derivation: every (experiment, cell, trial) gets its own stream, so
//! results do not depend on the order work items are scheduled in.

use crate::reservoir::Family;

const DOMAIN_WEIGHTS: u64 = 0x7765_6967_6874_7331;
const DOMAIN_INPUT: u64 = 0x696e_7075_7473_3031;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(words: &[u64]) -> u64 {
    words.iter().fold(0, |h, &w| splitmix64(h ^ w))
}

fn label_hash(label: &str) -> u64 {
    // FNV-1a
    label
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed for the reservoir weights of one trial in one grid cell.
pub fn derive_seed(master: u64, family: Family, cell: (usize, usize), trial: usize) -> u64 {
    mix(&[
        DOMAIN_WEIGHTS,
        master,
        label_hash(family.label()),
        cell.0 as u64,
        cell.1 as u64,
        trial as u64,
    ])
}

/// Seed for an input stream. Streams depend only on the trial index and the
/// segment (training, evaluation, ...), so every cell and family of a trial
/// sees the same inputs.
pub fn input_seed(master: u64, trial: usize, segment: u64) -> u64 {
    mix(&[DOMAIN_INPUT, master, trial as u64, segment])
}
