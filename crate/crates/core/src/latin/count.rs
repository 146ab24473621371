//! Exact totals of Latin rectangles without visiting every rectangle.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::enumerate::check_dims;

/// Largest width for the `2^m` last-row table.
const MAX_TABLE_WIDTH: usize = 24;

/// Row-order count: backtrack over the first `i - 1` rows, then count the
/// completions of the last row as the permanent of the 0/1 matrix of
/// allowed (column, symbol) pairs, by dynamic programming over symbol sets.
pub fn count_latin_rectangles(i: usize, m: usize) -> Result<BigUint> {
    check_dims(i, m)?;
    if m > MAX_TABLE_WIDTH {
        return Err(Error::TooLarge {
            what: "last-row table",
            estimate: 1u128 << m,
            cap: 1u128 << MAX_TABLE_WIDTH,
        });
    }
    let full: u64 = (1u64 << m) - 1;
    if i == 1 {
        return Ok(last_row_completions(&vec![0u64; m], m));
    }
    let firsts: Vec<u8> = (0..m as u8).collect();
    // split on the first entry of the first row
    let total = firsts
        .par_iter()
        .map(|&s| {
            let mut col_used = vec![0u64; m];
            col_used[0] = 1 << s;
            let mut acc = BigUint::zero();
            rows(i - 1, m, 0, 1, 1u64 << s, full, &mut col_used, &mut acc);
            acc
        })
        .sum();
    Ok(total)
}

/// Fills row `r` (of the first `rows_left` rows still to build) at column `c`.
#[allow(clippy::too_many_arguments)]
fn rows(rows_left: usize, m: usize, r: usize, c: usize, row_used: u64, full: u64, col_used: &mut [u64], acc: &mut BigUint) {
    if c == m {
        if r + 1 == rows_left {
            *acc += last_row_completions(col_used, m);
        } else {
            rows(rows_left, m, r + 1, 0, 0, full, col_used, acc);
        }
        return;
    }
    let mut free = full & !row_used & !col_used[c];
    while free != 0 {
        let bit = free & free.wrapping_neg();
        free &= free - 1;
        col_used[c] |= bit;
        rows(rows_left, m, r, c + 1, row_used | bit, full, col_used, acc);
        col_used[c] &= !bit;
    }
}

/// Permanent of `[symbol s allowed in column c]` via `ways[S]` = number of
/// ways to fill the first `|S|` columns with exactly the symbols in `S`.
fn last_row_completions(col_used: &[u64], m: usize) -> BigUint {
    let size = 1usize << m;
    let mut ways = vec![0u128; size];
    ways[0] = 1;
    for set in 0..size {
        let w = ways[set];
        if w == 0 {
            continue;
        }
        let c = (set as u64).count_ones() as usize;
        if c == m {
            continue;
        }
        let mut free = !(set as u64) & !col_used[c] & ((size - 1) as u64);
        while free != 0 {
            let bit = free & free.wrapping_neg();
            free &= free - 1;
            ways[set | bit as usize] += w;
        }
    }
    BigUint::from(ways[size - 1])
}

/// Column-order count: memoized over the tuple of per-row used-symbol sets,
/// adding one column (an ordered `i`-tuple of distinct symbols) at a time.
pub fn count_latin_rectangles_by_columns(i: usize, m: usize) -> Result<BigUint> {
    check_dims(i, m)?;
    let mut memo: HashMap<Vec<u64>, BigUint> = HashMap::new();
    Ok(by_columns(&vec![0u64; i], m, &mut memo))
}

fn by_columns(used: &[u64], m: usize, memo: &mut HashMap<Vec<u64>, BigUint>) -> BigUint {
    if used[0].count_ones() as usize == m {
        return BigUint::one();
    }
    if let Some(v) = memo.get(used) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    let mut next = used.to_vec();
    columns(used, m, 0, 0, &mut next, memo, &mut total);
    memo.insert(used.to_vec(), total.clone());
    total
}

fn columns(
    used: &[u64],
    m: usize,
    r: usize,
    col_mask: u64,
    next: &mut Vec<u64>,
    memo: &mut HashMap<Vec<u64>, BigUint>,
    total: &mut BigUint,
) {
    if r == used.len() {
        *total += by_columns(&next.clone(), m, memo);
        return;
    }
    for s in 0..m {
        let bit = 1u64 << s;
        if used[r] & bit != 0 || col_mask & bit != 0 {
            continue;
        }
        next[r] = used[r] | bit;
        columns(used, m, r + 1, col_mask | bit, next, memo, total);
        next[r] = used[r];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_counts() {
        for (i, m, n) in [(2, 2, 2u64), (3, 3, 12), (4, 4, 576), (5, 5, 161_280), (2, 4, 216), (1, 6, 720)] {
            assert_eq!(count_latin_rectangles(i, m).unwrap(), BigUint::from(n), "rows ({i},{m})");
            assert_eq!(count_latin_rectangles_by_columns(i, m).unwrap(), BigUint::from(n), "cols ({i},{m})");
        }
    }

    #[test]
    fn derangement_counts() {
        // second rows are derangements of the first
        for (m, d) in [(3, 2u64), (4, 9), (5, 44), (6, 265)] {
            let f: u64 = (1..=m as u64).product();
            assert_eq!(count_latin_rectangles(2, m).unwrap(), BigUint::from(f * d));
        }
    }
}
