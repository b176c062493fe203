#![allow(dead_code)]

pub mod oracles;

use frame_rkhs::normal::NormalStream;

/// Deterministic standard-normal vector for test probes.
pub fn normals(seed: u64, n: usize) -> Vec<f64> {
    NormalStream::new(seed, 0xC0FFEE).normals(n)
}
