//! Deterministic seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha8 stream whose seed is
//! `SHA-256(master ‖ len(label) ‖ label ‖ idx_0 ‖ idx_1 ‖ ...)`, truncated to
//! the first eight bytes read little-endian. All integers are encoded as
//! little-endian `u64`. The scheme is part of the output format: changing it
//! changes every published number.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type TaskRng = ChaCha8Rng;

pub fn derive_seed(master: u64, label: &str, indices: &[u64]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    for idx in indices {
        hasher.update(idx.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(head)
}

pub fn task_rng(master: u64, label: &str, indices: &[u64]) -> TaskRng {
    TaskRng::seed_from_u64(derive_seed(master, label, indices))
}
