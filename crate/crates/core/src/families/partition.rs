use std::fmt;

use serde::{Deserialize, Serialize};

use super::subset::{low_mask, Subset, MAX_GROUND};
use crate::error::{invalid, Result};

/// An ordered partition `P_1, ..., P_l` of `[n]` into non-empty blocks.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Subset>,
    // block index of element i is block_of[i - 1]
    block_of: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return invalid(format!("ground set size must be in 1..={MAX_GROUND}, got {n}"));
        }
        let mut seen = 0u64;
        let mut subsets = Vec::with_capacity(blocks.len());
        let mut block_of = vec![0u8; n];
        for (idx, block) in blocks.iter().enumerate() {
            let b = Subset::new(n, block.iter().copied())?;
            if b.is_empty() {
                return invalid(format!("partition block {} is empty", idx + 1));
            }
            if b.len() != block.len() || seen & b.bits() != 0 {
                return invalid("partition blocks overlap or repeat an element");
            }
            seen |= b.bits();
            for e in b.iter() {
                block_of[e - 1] = idx as u8;
            }
            subsets.push(b);
        }
        if seen != low_mask(n) {
            return invalid(format!("partition blocks do not cover [1, {n}]"));
        }
        Ok(Self { n, blocks: subsets, block_of })
    }

    /// Every element in its own block.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).map(|e| vec![e]).collect())
    }

    /// Consecutive blocks `{1..size}, {size+1..2 size}, ...`; the last block may be short.
    pub fn consecutive(n: usize, size: usize) -> Result<Self> {
        if size == 0 {
            return invalid("block size must be positive");
        }
        let blocks = (1..=n)
            .collect::<Vec<_>>()
            .chunks(size)
            .map(|c| c.to_vec())
            .collect();
        Self::new(n, blocks)
    }

    /// Parses the text shorthand `"1,2|3,4|5"`; `n` is the largest element.
    pub fn parse(text: &str) -> Result<Self> {
        let blocks = parse_blocks(text)?;
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Self::new(n, blocks)
    }

    /// Parses a partition of a known ground set. Besides the `|`-shorthand this
    /// accepts `singletons` and `consecutive:<size>`.
    pub fn parse_for(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text == "singletons" {
            return Self::singletons(n);
        }
        if let Some(size) = text.strip_prefix("consecutive:") {
            let size = size
                .trim()
                .parse()
                .map_err(|_| crate::Error::InvalidInput(format!("bad block size in {text:?}")))?;
            return Self::consecutive(n, size);
        }
        Self::new(n, parse_blocks(text)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PartitionJson = serde_json::from_str(text)?;
        let n = raw.blocks.iter().flatten().copied().max().unwrap_or(0);
        Self::new(n, raw.blocks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PartitionJson { blocks: self.block_lists() })
            .expect("partition serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.to_vec()).collect()
    }

    /// Index of the block holding element `e` (1-based element).
    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e - 1] as usize
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Subset::len).max().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == self.n
    }

    #[inline]
    pub(crate) fn excess_bits(&self, bits: u64) -> usize {
        self.blocks
            .iter()
            .map(|b| (b.bits() & bits).count_ones().saturating_sub(1) as usize)
            .sum()
    }

    #[inline]
    pub(crate) fn admissible_bits(&self, bits: u64) -> bool {
        self.blocks.iter().all(|b| (b.bits() & bits).count_ones() <= 1)
    }

    pub(crate) fn check_ground(&self, a: &Subset) -> Result<()> {
        if a.ground() != self.n {
            return invalid(format!(
                "subset over [{}] used with a partition of [{}]",
                a.ground(),
                self.n
            ));
        }
        Ok(())
    }
}

fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>> {
    let text = text.trim();
    if text.is_empty() {
        return invalid("empty partition text");
    }
    text.split('|')
        .map(|block| {
            block
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<usize>()
                        .map_err(|_| crate::Error::InvalidInput(format!("bad element {e:?}")))
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson { blocks: self.block_lists() }.serialize(s)
    }
}
