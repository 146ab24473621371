use std::fmt;

use crate::error::{Error, Result};

/// Ordered m-tuple of the column contents of an `(i, m)` rectangle, each
/// content sorted ascending. Symbols are 0-based.
///
/// Ordering is lexicographic in the concatenation of the sorted subsets, which
/// is also the canonical encoding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    subsets: Vec<Vec<u8>>,
    i: usize,
}

impl Pattern {
    /// Validates and canonicalizes 0-based subsets.
    pub fn new(i: usize, m: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if subsets.len() != m {
            return Err(Error::InvalidPattern(format!(
                "expected {m} subsets, got {}",
                subsets.len()
            )));
        }
        let mut occurrences = vec![0usize; m];
        let mut canon = Vec::with_capacity(m);
        for (q, mut subset) in subsets.into_iter().enumerate() {
            subset.sort_unstable();
            subset.dedup();
            if subset.len() != i {
                return Err(Error::InvalidPattern(format!(
                    "subset {} does not have exactly {i} distinct elements",
                    q + 1
                )));
            }
            for &s in &subset {
                if s >= m {
                    return Err(Error::InvalidPattern(format!("symbol {} out of range", s + 1)));
                }
                occurrences[s] += 1;
            }
            canon.push(subset.into_iter().map(|s| s as u8).collect());
        }
        if let Some(s) = occurrences.iter().position(|&c| c != i) {
            return Err(Error::InvalidPattern(format!(
                "symbol {} occurs in {} subsets, expected {i}",
                s + 1,
                occurrences[s]
            )));
        }
        Ok(Pattern { subsets: canon, i })
    }

    pub fn from_one_based(i: usize, subsets: &[Vec<usize>]) -> Result<Self> {
        let m = subsets.len();
        let shifted = subsets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&v| {
                        v.checked_sub(1)
                            .ok_or_else(|| Error::InvalidPattern("symbol 0".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(i, m, shifted)
    }

    pub(crate) fn from_sorted_unchecked(i: usize, _m: usize, subsets: Vec<Vec<usize>>) -> Self {
        Pattern {
            subsets: subsets
                .into_iter()
                .map(|s| s.into_iter().map(|v| v as u8).collect())
                .collect(),
            i,
        }
    }

    /// Decodes per-column symbol bitmasks.
    pub(crate) fn from_masks(i: usize, masks: &[u64]) -> Self {
        let subsets = masks
            .iter()
            .map(|&mask| {
                let mut bits = mask;
                let mut subset = Vec::with_capacity(i);
                while bits != 0 {
                    subset.push(bits.trailing_zeros() as u8);
                    bits &= bits - 1;
                }
                subset
            })
            .collect();
        Pattern { subsets, i }
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        self.subsets
            .iter()
            .map(|s| s.iter().fold(0u64, |acc, &v| acc | (1 << v)))
            .collect()
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn m(&self) -> usize {
        self.subsets.len()
    }

    pub fn subset(&self, q: usize) -> Vec<usize> {
        self.subsets[q].iter().map(|&v| v as usize).collect()
    }

    /// Canonical encoding: the concatenation of the sorted subsets (0-based).
    pub fn encoding(&self) -> Vec<u8> {
        self.subsets.concat()
    }

    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.subsets
            .iter()
            .map(|s| s.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    /// Pattern `(self, other + m)` of a concatenation.
    pub fn concatenate(&self, other: &Pattern) -> Result<Pattern> {
        if self.i != other.i {
            return Err(Error::RowCountMismatch {
                left: self.i,
                right: other.i,
            });
        }
        let shift = self.m() as u8;
        let mut subsets = self.subsets.clone();
        subsets.extend(
            other
                .subsets
                .iter()
                .map(|s| s.iter().map(|&v| v + shift).collect()),
        );
        Ok(Pattern { subsets, i: self.i })
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Pattern").field(&self.one_based()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Pattern::from_one_based(2, &[vec![1, 2], vec![2, 1]]).is_ok());
        assert!(Pattern::from_one_based(2, &[vec![1, 2], vec![1, 3], vec![2, 3]]).is_ok());
        // symbol 1 occurs three times
        assert!(Pattern::from_one_based(2, &[vec![1, 2], vec![1, 3], vec![1, 3]]).is_err());
        assert!(Pattern::from_one_based(2, &[vec![1, 1], vec![2, 2]]).is_err());
        assert!(Pattern::from_one_based(1, &[vec![3], vec![1]]).is_err());
    }

    #[test]
    fn masks_round_trip() {
        let p = Pattern::from_one_based(2, &[vec![2, 3], vec![1, 3], vec![1, 2]]).unwrap();
        assert_eq!(Pattern::from_masks(2, &p.masks()), p);
        assert_eq!(p.encoding(), vec![1, 2, 0, 2, 0, 1]);
    }
}
