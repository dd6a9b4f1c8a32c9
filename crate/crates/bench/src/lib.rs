//! Fixed inputs shared by the benchmarks.

use trigen_core::Partition;

/// Deterministic pseudo-random partition of `{0..n-1}` with at most `k` blocks.
pub fn scrambled(n: usize, k: usize, salt: u64) -> Partition {
    let mut s = salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let labels: Vec<usize> = (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s % k as u64) as usize
        })
        .collect();
    Partition::from_labels(&labels)
}
