//! Labelled, counter-based random streams derived from one master seed.
//!
//! The ChaCha key is `SHA-256(label || master_seed)` and the entity index
//! selects the ChaCha stream, so every `(label, index)` pair gets its own
//! sequence no matter which other streams are drawn, or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

pub fn substream(master_seed: u64, label: &str, index: u64) -> StreamRng {
    let mut h = Sha256::new();
    h.update(label.as_bytes());
    h.update([0u8]);
    h.update(master_seed.to_le_bytes());
    let key: [u8; 32] = h.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Parses a 64-bit seed written in decimal or as `0x`-prefixed hex.
pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}
