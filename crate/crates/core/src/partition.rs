//! Set partitions of `[m]` with blocks in binary order.

use rand::Rng;

use crate::error::{Error, Result};

/// A partition of `[m]`; blocks are bitmasks sorted by value, so the block
/// holding `m` is always last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    m: usize,
    blocks: Vec<u64>,
}

impl Partition {
    pub fn new(m: usize, mut blocks: Vec<u64>) -> Result<Self> {
        if m == 0 || m > 63 {
            return Err(Error::InvalidInput(format!("ground set size {m} out of range")));
        }
        let full = (1u64 << m) - 1;
        let mut union = 0u64;
        for &b in &blocks {
            if b == 0 || b & !full != 0 || union & b != 0 {
                return Err(Error::InvalidInput(format!(
                    "block {b:#b} is empty, overlaps, or leaves [{m}]"
                )));
            }
            union |= b;
        }
        if union != full {
            return Err(Error::InvalidInput("blocks do not cover the ground set".into()));
        }
        blocks.sort_unstable();
        Ok(Partition { m, blocks })
    }

    /// All singletons of `[m]`.
    pub fn singletons(m: usize) -> Result<Self> {
        Self::new(m, (0..m).map(|i| 1u64 << i).collect())
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Uniformly random labelling conditioned on using all `k` labels.
    pub fn random<R: Rng>(m: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::InvalidInput(format!("cannot split [{m}] into {k} blocks")));
        }
        loop {
            let mut blocks = vec![0u64; k];
            for i in 0..m {
                blocks[rng.gen_range(0..k)] |= 1 << i;
            }
            if blocks.iter().all(|&b| b != 0) {
                return Self::new(m, blocks);
            }
        }
    }
}

/// Visits every partition of `[m]` into exactly `k` blocks.
pub fn for_each_partition<F: FnMut(&[u64])>(m: usize, k: usize, mut visit: F) {
    fn go<F: FnMut(&[u64])>(pos: usize, m: usize, k: usize, blocks: &mut Vec<u64>, visit: &mut F) {
        // not enough elements left to open the missing blocks
        if k - blocks.len() > m - pos {
            return;
        }
        if pos == m {
            let mut sorted = blocks.clone();
            sorted.sort_unstable();
            visit(&sorted);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << pos;
            go(pos + 1, m, k, blocks, visit);
            blocks[b] &= !(1 << pos);
        }
        if blocks.len() < k {
            blocks.push(1 << pos);
            go(pos + 1, m, k, blocks, visit);
            blocks.pop();
        }
    }
    if k > m || (k == 0 && m > 0) {
        return;
    }
    go(0, m, k, &mut Vec::with_capacity(k), &mut visit);
}
