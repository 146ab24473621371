use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::pattern::Pattern;

/// Column-even and column-odd counts for one pattern.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternCount {
    pub plus: BigUint,
    pub minus: BigUint,
}

impl PatternCount {
    pub fn total(&self) -> BigUint {
        &self.plus + &self.minus
    }

    /// `plus - minus`.
    pub fn difference(&self) -> BigInt {
        BigInt::from(self.plus.clone()) - BigInt::from(self.minus.clone())
    }
}

/// Exact per-pattern signed counts of Latin `(i, m)` rectangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedTally {
    pub i: usize,
    pub m: usize,
    pub entries: BTreeMap<Pattern, PatternCount>,
}

impl SignedTally {
    pub fn empty(i: usize, m: usize) -> Self {
        SignedTally {
            i,
            m,
            entries: BTreeMap::new(),
        }
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().map(PatternCount::total).sum()
    }

    pub fn plus_total(&self) -> BigUint {
        self.entries.values().map(|c| c.plus.clone()).sum()
    }

    pub fn minus_total(&self) -> BigUint {
        self.entries.values().map(|c| c.minus.clone()).sum()
    }

    /// `Σ_patterns (plus - minus)`.
    pub fn signed_sum(&self) -> BigInt {
        self.entries.values().map(PatternCount::difference).sum()
    }

    /// `Σ_patterns (plus - minus)²`.
    pub fn sum_of_squared_imbalances(&self) -> BigInt {
        self.entries
            .values()
            .map(|c| {
                let d = c.difference();
                &d * &d
            })
            .sum()
    }

    pub fn has_imbalanced_pattern(&self) -> bool {
        self.entries.values().any(|c| c.plus != c.minus)
    }

    pub fn get(&self, pattern: &Pattern) -> Option<&PatternCount> {
        self.entries.get(pattern)
    }

    pub fn merge(&mut self, other: &SignedTally) {
        for (pattern, count) in &other.entries {
            let slot = self.entries.entry(pattern.clone()).or_default();
            slot.plus += &count.plus;
            slot.minus += &count.minus;
        }
    }

    pub(crate) fn merge_block(&mut self, block: &BlockTally) {
        for (masks, &(plus, minus)) in &block.counts {
            let slot = self
                .entries
                .entry(Pattern::from_masks(self.i, masks))
                .or_default();
            slot.plus += BigUint::from(plus);
            slot.minus += BigUint::from(minus);
        }
    }

    pub fn to_json(&self) -> TallyJson {
        TallyJson {
            i: self.i,
            m: self.m,
            patterns: self
                .entries
                .iter()
                .map(|(p, c)| PatternCountJson {
                    pattern: p.one_based(),
                    plus: c.plus.to_string(),
                    minus: c.minus.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &TallyJson) -> Result<Self> {
        let mut tally = SignedTally::empty(json.i, json.m);
        for entry in &json.patterns {
            let pattern = Pattern::from_one_based(json.i, &entry.pattern)?;
            if pattern.m() != json.m {
                return Err(Error::InvalidPattern("pattern width differs from m".into()));
            }
            let count = PatternCount {
                plus: parse_count(&entry.plus)?,
                minus: parse_count(&entry.minus)?,
            };
            tally.entries.insert(pattern, count);
        }
        Ok(tally)
    }
}

pub(crate) fn parse_count(text: &str) -> Result<BigUint> {
    text.parse()
        .map_err(|_| Error::Parse(format!("not a nonnegative integer: {text:?}")))
}

/// Tally export: `{"i", "m", "patterns": [{"pattern", "plus", "minus"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TallyJson {
    pub i: usize,
    pub m: usize,
    pub patterns: Vec<PatternCountJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCountJson {
    pub pattern: Vec<Vec<usize>>,
    pub plus: String,
    pub minus: String,
}

/// Fixed-width counts for one enumeration block, keyed by column masks.
#[derive(Debug, Clone, Default)]
pub(crate) struct BlockTally {
    pub counts: HashMap<Vec<u64>, (u128, u128)>,
}

impl BlockTally {
    pub fn add(&mut self, masks: &[u64], even: bool, amount: u128) {
        if let Some(slot) = self.counts.get_mut(masks) {
            if even {
                slot.0 += amount;
            } else {
                slot.1 += amount;
            }
        } else {
            let entry = if even { (amount, 0) } else { (0, amount) };
            self.counts.insert(masks.to_vec(), entry);
        }
    }

    pub fn plus_minus(&self) -> (u128, u128) {
        self.counts
            .values()
            .fold((0, 0), |(p, m), &(a, b)| (p + a, m + b))
    }

    pub fn into_tally(self, i: usize, m: usize) -> SignedTally {
        let mut t = SignedTally::empty(i, m);
        t.merge_block(&self);
        t
    }
}
