//! Integer partitions and set partitions.
//!
//! Partitions are kept in a canonical total order: by length ascending, then
//! reverse-lexicographically (larger leading parts first). Every matrix row or
//! column labelled by partitions uses this order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn single(part: u32) -> Self {
        Partition::new(vec![part])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiset union of the parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// The parts with the parts of `other` removed once each, if contained.
    pub fn remove(&self, other: &Partition) -> Option<Partition> {
        let mut parts = self.0.clone();
        for p in &other.0 {
            let pos = parts.iter().position(|q| q == p)?;
            parts.remove(pos);
        }
        Some(Partition(parts))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `d` with at most `max_len` parts, in canonical order.
pub fn partitions(d: u32, max_len: Option<usize>) -> Vec<Partition> {
    let max_len = max_len.unwrap_or(d as usize).min(d as usize);
    if d == 0 {
        return vec![Partition::empty()];
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut current = Vec::with_capacity(len);
        fixed_length(d, len, d, &mut current, &mut out);
    }
    out
}

// Emits partitions of `remaining` into exactly `len` parts, each <= `cap`,
// largest leading parts first.
fn fixed_length(
    remaining: u32,
    len: usize,
    cap: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if len == 0 {
        if remaining == 0 {
            out.push(Partition(current.clone()));
        }
        return;
    }
    let len32 = len as u32;
    if remaining < len32 {
        return;
    }
    let hi = cap.min(remaining - (len32 - 1));
    let lo = remaining.div_ceil(len32);
    for p in (lo..=hi).rev() {
        current.push(p);
        fixed_length(remaining - p, len - 1, p, current, out);
        current.pop();
    }
}

/// `|P(d, k)|`, counted by the recurrence `p(d, k) = p(d, k-1) + p(d-k, k)`
/// (partitions into at most `k` parts equal partitions into parts `<= k`).
pub fn partition_count(d: u32, k: u32) -> u64 {
    let d = d as usize;
    let k = k as usize;
    // table[j][m] = number of partitions of m into parts of size <= j
    let mut row = vec![0u64; d + 1];
    row[0] = 1;
    for j in 1..=k.min(d.max(1)) {
        for m in j..=d {
            row[m] += row[m - j];
        }
    }
    if k == 0 {
        return u64::from(d == 0);
    }
    row[d]
}

/// Partitions of `{1..m}` into blocks, stored 0-based with blocks sorted by
/// least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds from arbitrary blocks; returns `None` unless they partition `0..m`.
    pub fn from_blocks(m: usize, blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; m];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return None;
            }
            for &x in b {
                if x >= m || seen[x] {
                    return None;
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Some(SetPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// All `Bell(m)` set partitions of `{0..m}`, enumerated by restricted growth
/// strings in lexicographic order.
pub fn set_partitions(m: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        let m = rgs.len();
        if i == m {
            let nblocks = if m == 0 { 0 } else { max + 1 };
            let mut blocks = vec![Vec::new(); nblocks];
            for (x, &b) in rgs.iter().enumerate() {
                blocks[b].push(x);
            }
            out.push(SetPartition { blocks });
            return;
        }
        let top = if i == 0 { 0 } else { max + 1 };
        for b in 0..=top {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}
