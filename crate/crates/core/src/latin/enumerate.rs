//! Backtracking enumeration of Latin rectangles.
//!
//! Two independent search orders are provided. The production search fills
//! the rectangle row by row (each row left to right, smallest symbol first),
//! so rectangles appear in row-by-row lexicographic order; its work is split
//! into blocks by the first two rows. The column-order search fills one
//! column at a time and exists to cross-check the first.
//!
//! Column signs are tracked incrementally: placing `s` below the entries of
//! a column adds one inversion per earlier entry larger than `s`.

use std::collections::HashSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::factorial;

use super::pattern::Pattern;
use super::rectangle::LatinRectangle;
use super::tally::{BlockTally, PatternCount, SignedTally};

/// Search order used to build a tally.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EnumerationOrder {
    #[default]
    RowByRow,
    ColumnByColumn,
}

/// Optional symmetry reduction.
///
/// `FirstRowFixed` only applies to full squares: it enumerates squares whose
/// first row is `1 2 … m` and rescales. Relabelling symbols by π multiplies
/// every full column's sign by sgn(π), so the square's sign changes by
/// sgn(π)^m.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Reduction {
    #[default]
    None,
    FirstRowFixed,
}

#[derive(Debug, Clone, Default)]
pub struct TallyOptions {
    pub order: EnumerationOrder,
    pub reduction: Reduction,
    pub filter: Option<Pattern>,
}

/// First rows of a block, 0-based.
pub type Prefix = Vec<Vec<u8>>;

pub(crate) fn check_dims(i: usize, m: usize) -> Result<()> {
    if i > m {
        return Err(Error::TooManyRows { i, m });
    }
    if i == 0 || m == 0 || m > 64 {
        return Err(Error::OutOfRange(format!("(i, m) = ({i}, {m})")));
    }
    Ok(())
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

#[inline]
fn larger_than(s: u32) -> u64 {
    if s >= 63 {
        0
    } else {
        !((1u64 << (s + 1)) - 1)
    }
}

fn allowed_masks(m: usize, filter: Option<&Pattern>) -> Vec<u64> {
    match filter {
        Some(p) => p.masks(),
        None => vec![full_mask(m); m],
    }
}

trait Sink {
    fn leaf(&mut self, col_used: &[u64], parity: u32, grid: &[u8]);
}

#[derive(Default)]
struct CountSink {
    plus: u128,
    minus: u128,
}

impl Sink for CountSink {
    #[inline]
    fn leaf(&mut self, _: &[u64], parity: u32, _: &[u8]) {
        if parity.is_multiple_of(2) {
            self.plus += 1;
        } else {
            self.minus += 1;
        }
    }
}

impl Sink for BlockTally {
    fn leaf(&mut self, col_used: &[u64], parity: u32, _: &[u8]) {
        self.add(col_used, parity.is_multiple_of(2), 1);
    }
}

struct PrefixSink {
    rows: usize,
    m: usize,
    out: Vec<Prefix>,
}

impl Sink for PrefixSink {
    fn leaf(&mut self, _: &[u64], _: u32, grid: &[u8]) {
        self.out.push(
            (0..self.rows)
                .map(|r| grid[r * self.m..(r + 1) * self.m].to_vec())
                .collect(),
        );
    }
}

struct VisitSink<F> {
    rows: usize,
    m: usize,
    visit: F,
    count: u64,
}

impl<F: FnMut(&LatinRectangle)> Sink for VisitSink<F> {
    fn leaf(&mut self, _: &[u64], _: u32, grid: &[u8]) {
        let rows = (0..self.rows)
            .map(|r| grid[r * self.m..(r + 1) * self.m].to_vec())
            .collect();
        (self.visit)(&LatinRectangle::from_raw(self.m, rows));
        self.count += 1;
    }
}

struct RowSearch<'a> {
    m: usize,
    full: u64,
    allowed: &'a [u64],
    first_row_fixed: bool,
    col_used: Vec<u64>,
    grid: Vec<u8>,
}

impl<'a> RowSearch<'a> {
    fn new(i: usize, m: usize, allowed: &'a [u64], first_row_fixed: bool) -> Self {
        RowSearch {
            m,
            full: full_mask(m),
            allowed,
            first_row_fixed,
            col_used: vec![0; m],
            grid: vec![0; i * m],
        }
    }

    /// Loads prefix rows, returning the accumulated inversion parity, or
    /// `None` if the prefix violates the filter or column constraints.
    fn load_prefix(&mut self, prefix: &[Vec<u8>]) -> Option<u32> {
        let mut parity = 0;
        self.col_used.iter_mut().for_each(|c| *c = 0);
        for (r, row) in prefix.iter().enumerate() {
            for (c, &s) in row.iter().enumerate() {
                let bit = 1u64 << s;
                if self.col_used[c] & bit != 0 || self.allowed[c] & bit == 0 {
                    return None;
                }
                parity += (self.col_used[c] & larger_than(s as u32)).count_ones();
                self.col_used[c] |= bit;
                self.grid[r * self.m + c] = s;
            }
        }
        Some(parity)
    }

    fn run<S: Sink>(&mut self, r: usize, c: usize, row_used: u64, parity: u32, stop: usize, sink: &mut S) {
        if c == self.m {
            self.run(r + 1, 0, 0, parity, stop, sink);
            return;
        }
        if r == stop {
            sink.leaf(&self.col_used, parity, &self.grid[..stop * self.m]);
            return;
        }
        let mut cand = self.allowed[c] & !self.col_used[c] & !row_used & self.full;
        if self.first_row_fixed && r == 0 {
            cand &= 1u64 << c;
        }
        while cand != 0 {
            let s = cand.trailing_zeros();
            cand &= cand - 1;
            let bit = 1u64 << s;
            let inv = (self.col_used[c] & larger_than(s)).count_ones();
            self.col_used[c] |= bit;
            self.grid[r * self.m + c] = s as u8;
            self.run(r, c + 1, row_used | bit, parity + inv, stop, sink);
            self.col_used[c] ^= bit;
        }
    }
}

struct ColumnSearch<'a> {
    i: usize,
    m: usize,
    full: u64,
    allowed: &'a [u64],
    first_row_fixed: bool,
    row_used: Vec<u64>,
    col_masks: Vec<u64>,
    grid: Vec<u8>,
}

impl<'a> ColumnSearch<'a> {
    fn new(i: usize, m: usize, allowed: &'a [u64], first_row_fixed: bool) -> Self {
        ColumnSearch {
            i,
            m,
            full: full_mask(m),
            allowed,
            first_row_fixed,
            row_used: vec![0; i],
            col_masks: vec![0; m],
            grid: vec![0; i * m],
        }
    }

    fn run<S: Sink>(&mut self, c: usize, r: usize, parity: u32, stop_col: usize, sink: &mut S) {
        if r == self.i {
            self.run(c + 1, 0, parity, stop_col, sink);
            return;
        }
        if c == stop_col {
            sink.leaf(&self.col_masks, parity, &self.grid);
            return;
        }
        let mut cand = self.allowed[c] & !self.col_masks[c] & !self.row_used[r] & self.full;
        if self.first_row_fixed && r == 0 {
            cand &= 1u64 << c;
        }
        while cand != 0 {
            let s = cand.trailing_zeros();
            cand &= cand - 1;
            let bit = 1u64 << s;
            let inv = (self.col_masks[c] & larger_than(s)).count_ones();
            self.col_masks[c] |= bit;
            self.row_used[r] |= bit;
            self.grid[r * self.m + c] = s as u8;
            self.run(c, r + 1, parity + inv, stop_col, sink);
            self.col_masks[c] ^= bit;
            self.row_used[r] ^= bit;
        }
    }
}

/// Visits every Latin `(i, m)` rectangle exactly once, in row-by-row
/// lexicographic order. With a filter only rectangles of that pattern are
/// visited. Returns the number visited.
pub fn enumerate_latin_rectangles<F>(
    i: usize,
    m: usize,
    filter: Option<&Pattern>,
    visit: F,
) -> Result<u64>
where
    F: FnMut(&LatinRectangle),
{
    check_dims(i, m)?;
    check_filter(i, m, filter)?;
    let allowed = allowed_masks(m, filter);
    let mut search = RowSearch::new(i, m, &allowed, false);
    let mut sink = VisitSink {
        rows: i,
        m,
        visit,
        count: 0,
    };
    search.run(0, 0, 0, 0, i, &mut sink);
    Ok(sink.count)
}

fn check_filter(i: usize, m: usize, filter: Option<&Pattern>) -> Result<()> {
    if let Some(p) = filter {
        if p.i() != i || p.m() != m {
            return Err(Error::InvalidPattern(format!(
                "filter has shape ({}, {}), expected ({i}, {m})",
                p.i(),
                p.m()
            )));
        }
    }
    Ok(())
}

fn check_reduction(i: usize, m: usize, options: &TallyOptions) -> Result<()> {
    if options.reduction == Reduction::FirstRowFixed && i != m {
        return Err(Error::OutOfRange(
            "first-row reduction applies to full squares only".into(),
        ));
    }
    Ok(())
}

/// Number of rows that make up one work block.
pub fn prefix_depth(i: usize) -> usize {
    i.min(2)
}

/// All block prefixes (valid first `min(i, 2)` rows) in lexicographic order.
pub fn block_prefixes(i: usize, m: usize, options: &TallyOptions) -> Result<Vec<Prefix>> {
    check_dims(i, m)?;
    check_filter(i, m, options.filter.as_ref())?;
    check_reduction(i, m, options)?;
    let allowed = allowed_masks(m, options.filter.as_ref());
    let depth = prefix_depth(i);
    let mut search = RowSearch::new(depth, m, &allowed, options.reduction == Reduction::FirstRowFixed);
    let mut sink = PrefixSink {
        rows: depth,
        m,
        out: Vec::new(),
    };
    search.run(0, 0, 0, 0, depth, &mut sink);
    Ok(sink.out)
}

/// Counts every rectangle that starts with `prefix`, keyed by column masks.
pub(crate) fn count_block(i: usize, m: usize, options: &TallyOptions, prefix: &[Vec<u8>]) -> BlockTally {
    let allowed = allowed_masks(m, options.filter.as_ref());
    let mut search = RowSearch::new(i, m, &allowed, options.reduction == Reduction::FirstRowFixed);
    let Some(parity) = search.load_prefix(prefix) else {
        return BlockTally::default();
    };
    if i == m || options.filter.is_some() {
        let mut sink = CountSink::default();
        search.run(prefix.len(), 0, 0, parity, i, &mut sink);
        let mut block = BlockTally::default();
        if sink.plus + sink.minus > 0 {
            let masks = match &options.filter {
                Some(p) => p.masks(),
                None => vec![full_mask(m); m],
            };
            block.counts.insert(masks, (sink.plus, sink.minus));
        }
        block
    } else {
        let mut sink = BlockTally::default();
        search.run(prefix.len(), 0, 0, parity, i, &mut sink);
        sink
    }
}

pub(crate) fn merge_blocks(mut a: BlockTally, b: BlockTally) -> BlockTally {
    if a.counts.len() < b.counts.len() {
        return merge_blocks(b, a);
    }
    for (k, (p, n)) in b.counts {
        let slot = a.counts.entry(k).or_insert((0, 0));
        slot.0 += p;
        slot.1 += n;
    }
    a
}

/// Runs the row-order search over every block not in `skip`, calling
/// `on_block` as each completes, and returns the merged counts of the
/// blocks it ran. Blocks run on the current rayon pool.
pub(crate) fn tally_blocks<F>(
    i: usize,
    m: usize,
    options: &TallyOptions,
    skip: &HashSet<Prefix>,
    on_block: F,
) -> Result<BlockTally>
where
    F: Fn(&Prefix, &BlockTally) -> Result<()> + Sync,
{
    let prefixes = block_prefixes(i, m, options)?;
    prefixes
        .par_iter()
        .filter(|p| !skip.contains(*p))
        .map(|prefix| {
            let block = count_block(i, m, options, prefix);
            on_block(prefix, &block)?;
            Ok(block)
        })
        .try_reduce(BlockTally::default, |a, b| Ok(merge_blocks(a, b)))
}

fn column_order_blocks(i: usize, m: usize, options: &TallyOptions) -> BlockTally {
    let allowed = allowed_masks(m, options.filter.as_ref());
    let fixed = options.reduction == Reduction::FirstRowFixed;
    // Split on the first column's contents.
    let mut firsts = PrefixSink {
        rows: i,
        m,
        out: Vec::new(),
    };
    ColumnSearch::new(i, m, &allowed, fixed).run(0, 0, 0, 1, &mut firsts);
    firsts
        .out
        .par_iter()
        .map(|grid_rows| {
            let mut search = ColumnSearch::new(i, m, &allowed, fixed);
            let mut parity = 0;
            for (r, row) in grid_rows.iter().enumerate() {
                let s = row[0];
                let bit = 1u64 << s;
                parity += (search.col_masks[0] & larger_than(s as u32)).count_ones();
                search.col_masks[0] |= bit;
                search.row_used[r] |= bit;
                search.grid[r * m] = s;
            }
            let mut sink = BlockTally::default();
            search.run(1, 0, parity, m, &mut sink);
            sink
        })
        .reduce(BlockTally::default, merge_blocks)
}

/// Rescales a first-row-fixed square tally to the full count.
pub(crate) fn expand_first_row_reduction(tally: &mut SignedTally) {
    let m = tally.m;
    let count = factorial(m).to_biguint().expect("positive");
    for c in tally.entries.values_mut() {
        let (plus, minus) = (c.plus.clone(), c.minus.clone());
        if m.is_multiple_of(2) || m == 1 {
            *c = PatternCount {
                plus: plus * &count,
                minus: minus * &count,
            };
        } else {
            // Odd relabellings swap the two classes.
            let half = &count / BigUint::from(2u32);
            let both = (plus + minus) * half;
            *c = PatternCount {
                plus: both.clone(),
                minus: both,
            };
        }
    }
}

/// Exact per-pattern counts of column-even and column-odd rectangles.
pub fn signed_tally(i: usize, m: usize) -> Result<SignedTally> {
    signed_tally_with(i, m, &TallyOptions::default())
}

pub fn signed_tally_with(i: usize, m: usize, options: &TallyOptions) -> Result<SignedTally> {
    check_dims(i, m)?;
    check_filter(i, m, options.filter.as_ref())?;
    check_reduction(i, m, options)?;
    let block = match options.order {
        EnumerationOrder::RowByRow => tally_blocks(i, m, options, &HashSet::new(), |_, _| Ok(()))?,
        EnumerationOrder::ColumnByColumn => column_order_blocks(i, m, options),
    };
    let mut tally = block.into_tally(i, m);
    if options.reduction == Reduction::FirstRowFixed {
        expand_first_row_reduction(&mut tally);
    }
    Ok(tally)
}
