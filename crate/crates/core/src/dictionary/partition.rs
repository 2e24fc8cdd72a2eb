//! Truncating and partitioning a dictionary into power-of-two subblocks.

use crate::error::{invalid, Result};

fn floor_log2(x: usize) -> u32 {
    usize::BITS - 1 - x.leading_zeros()
}

/// Splits `total_cols` columns into `k` power-of-two subblocks maximizing
/// `sum floor(log2 L_k)`.
///
/// Runs `k` rounds. Round one takes the largest power of two that fits.
/// Each later round looks at the columns not yet used, `r`: when `r` is at
/// least half the largest block, a new block of `2^floor(log2 r)` columns is
/// opened; otherwise the largest block is halved. Returns the lengths in
/// descending order.
pub fn partition_subblocks(total_cols: usize, k: usize) -> Result<Vec<usize>> {
    if total_cols == 0 || k == 0 || (k > 1 && 2 * k > total_cols) {
        return Err(invalid(format!("sparsity {k} outside [1, {}] for {total_cols} columns", total_cols / 2)));
    }
    // Kept ascending; the largest block is last.
    let mut blocks = vec![1usize << floor_log2(total_cols)];
    for _ in 1..k {
        let used: usize = blocks.iter().sum();
        let remaining = total_cols - used;
        let largest = *blocks.last().expect("nonempty");
        if 2 * remaining >= largest {
            blocks.push(1 << floor_log2(remaining));
        } else {
            if largest < 2 {
                return Err(invalid(format!("cannot split {total_cols} columns into {k} subblocks")));
            }
            // Among equal largest blocks the lowest-index one is split; the
            // multiset is the same either way.
            let idx = blocks.iter().position(|&b| b == largest).expect("present");
            blocks[idx] = largest / 2;
            blocks.push(largest / 2);
        }
        blocks.sort_unstable();
    }
    blocks.reverse();
    Ok(blocks)
}

/// `sum floor(log2 L_k)`: the index bits carried by one column per block.
pub fn partition_bits(lengths: &[usize]) -> u32 {
    lengths.iter().map(|&l| floor_log2(l)).sum()
}
