use std::fmt;

use crate::error::{Error, Result};

use super::pattern::Pattern;

/// Sign of `∏_{p<p'} (a_{p'} - a_p)` for a column of distinct symbols.
pub fn column_sign(column: &[usize]) -> Result<i8> {
    if column.is_empty() {
        return Err(Error::InvalidColumn(Vec::new()));
    }
    let mut inversions = 0usize;
    for p in 0..column.len() {
        for pp in p + 1..column.len() {
            match column[pp].cmp(&column[p]) {
                std::cmp::Ordering::Equal => {
                    return Err(Error::InvalidColumn(column.to_vec()));
                }
                std::cmp::Ordering::Less => inversions += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// An `i × m` array whose rows are permutations of the `m` symbols and whose
/// columns have pairwise distinct entries. Symbols are stored 0-based and
/// rendered 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinRectangle {
    m: usize,
    rows: Vec<Vec<u8>>,
}

impl LatinRectangle {
    /// Builds a rectangle from 0-based rows, validating both invariants.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let i = rows.len();
        if i == 0 {
            return Err(Error::InvalidRectangle("no rows".into()));
        }
        let m = rows[0].len();
        if m == 0 || m > 64 {
            return Err(Error::InvalidRectangle(format!("unsupported width {m}")));
        }
        if i > m {
            return Err(Error::TooManyRows { i, m });
        }
        let mut col_used = vec![0u64; m];
        for (p, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidRectangle(format!("row {} has wrong length", p + 1)));
            }
            let mut row_used = 0u64;
            for (q, &s) in row.iter().enumerate() {
                if s >= m {
                    return Err(Error::InvalidRectangle(format!("symbol {} out of range", s + 1)));
                }
                let bit = 1u64 << s;
                if row_used & bit != 0 {
                    return Err(Error::InvalidRectangle(format!(
                        "row {} is not a permutation",
                        p + 1
                    )));
                }
                if col_used[q] & bit != 0 {
                    return Err(Error::InvalidRectangle(format!(
                        "column {} repeats symbol {}",
                        q + 1,
                        s + 1
                    )));
                }
                row_used |= bit;
                col_used[q] |= bit;
            }
        }
        Ok(LatinRectangle {
            m,
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(|s| s as u8).collect())
                .collect(),
        })
    }

    /// Builds a rectangle from rows written with symbols `1..=m`.
    pub fn from_one_based(rows: &[Vec<usize>]) -> Result<Self> {
        let shifted = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&s| {
                        s.checked_sub(1)
                            .ok_or_else(|| Error::InvalidRectangle("symbol 0".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LatinRectangle::new(shifted)
    }

    pub(crate) fn from_raw(m: usize, rows: Vec<Vec<u8>>) -> Self {
        LatinRectangle { m, rows }
    }

    pub fn i(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entry(&self, p: usize, q: usize) -> usize {
        self.rows[p][q] as usize
    }

    pub fn row(&self, p: usize) -> Vec<usize> {
        self.rows[p].iter().map(|&s| s as usize).collect()
    }

    pub fn column(&self, q: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[q] as usize).collect()
    }

    pub fn one_based_rows(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&s| s as usize + 1).collect())
            .collect()
    }

    /// Column sign ε_c: the product of the column signs.
    pub fn sign(&self) -> i8 {
        (0..self.m)
            .map(|q| column_sign(&self.column(q)).expect("validated rectangle"))
            .product()
    }

    pub fn is_column_even(&self) -> bool {
        self.sign() == 1
    }

    pub fn pattern(&self) -> Pattern {
        let subsets = (0..self.m)
            .map(|q| {
                let mut col = self.column(q);
                col.sort_unstable();
                col
            })
            .collect();
        Pattern::from_sorted_unchecked(self.i(), self.m, subsets)
    }

    /// Drops the last row.
    pub fn project_last_row(&self) -> Result<LatinRectangle> {
        if self.i() < 2 {
            return Err(Error::CannotProject);
        }
        Ok(LatinRectangle {
            m: self.m,
            rows: self.rows[..self.i() - 1].to_vec(),
        })
    }

    /// All rectangles with one more row whose projection is `self`, in
    /// lexicographic order of the new row.
    pub fn extensions(&self) -> Vec<LatinRectangle> {
        if self.i() == self.m {
            return Vec::new();
        }
        let col_used: Vec<u64> = (0..self.m)
            .map(|q| self.rows.iter().fold(0u64, |acc, r| acc | (1 << r[q])))
            .collect();
        let mut out = Vec::new();
        let mut row = vec![0u8; self.m];
        extend_row(self, &col_used, 0, 0, &mut row, &mut out);
        out
    }

    /// Places `other` to the right of `self`, shifting its symbols by `m`.
    pub fn concatenate(&self, other: &LatinRectangle) -> Result<LatinRectangle> {
        if self.i() != other.i() {
            return Err(Error::RowCountMismatch {
                left: self.i(),
                right: other.i(),
            });
        }
        let m = self.m + other.m;
        if m > 64 {
            return Err(Error::InvalidRectangle(format!("unsupported width {m}")));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                a.iter()
                    .copied()
                    .chain(b.iter().map(|&s| s + self.m as u8))
                    .collect()
            })
            .collect();
        Ok(LatinRectangle { m, rows })
    }
}

fn extend_row(
    base: &LatinRectangle,
    col_used: &[u64],
    q: usize,
    row_used: u64,
    row: &mut Vec<u8>,
    out: &mut Vec<LatinRectangle>,
) {
    let m = base.m;
    if q == m {
        let mut rows = base.rows.clone();
        rows.push(row.clone());
        out.push(LatinRectangle { m, rows });
        return;
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut cand = full & !row_used & !col_used[q];
    while cand != 0 {
        let s = cand.trailing_zeros();
        cand &= cand - 1;
        row[q] = s as u8;
        extend_row(base, col_used, q + 1, row_used | (1 << s), row, out);
    }
}

impl fmt::Debug for LatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.one_based_rows()).finish()
    }
}

impl fmt::Display for LatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.one_based_rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
