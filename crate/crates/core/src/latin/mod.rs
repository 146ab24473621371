//! Latin rectangles, their column signs and per-pattern signed tallies.

mod checkpoint;
mod count;
mod enumerate;
mod pattern;
mod rectangle;
mod tally;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

pub use checkpoint::{read_checkpoint, signed_tally_checkpointed, CheckpointRecord};
pub use count::{count_latin_rectangles, count_latin_rectangles_by_columns};
pub use enumerate::{
    block_prefixes, enumerate_latin_rectangles, prefix_depth, signed_tally, signed_tally_with,
    EnumerationOrder, Prefix, Reduction, TallyOptions,
};
pub use pattern::Pattern;
pub use rectangle::{column_sign, LatinRectangle};
pub use tally::{PatternCount, PatternCountJson, SignedTally, TallyJson};

/// `#CELS(m) - #COLS(m)`: the signed count of Latin squares of order `m`.
pub fn alon_tarsi_difference(m: usize) -> Result<BigInt> {
    alon_tarsi_difference_with(m, &TallyOptions::default())
}

pub fn alon_tarsi_difference_with(m: usize, options: &TallyOptions) -> Result<BigInt> {
    Ok(signed_tally_with(m, m, options)?.signed_sum())
}

pub fn project_last_row(rect: &LatinRectangle) -> Result<LatinRectangle> {
    rect.project_last_row()
}

pub fn concatenate(a: &LatinRectangle, b: &LatinRectangle) -> Result<LatinRectangle> {
    a.concatenate(b)
}

#[derive(Debug, Clone, Serialize)]
pub struct SignCounterexample {
    pub pattern: Vec<Vec<usize>>,
    pub projected_pattern: Vec<Vec<usize>>,
    pub first: Vec<Vec<usize>>,
    pub second: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignFactorizationReport {
    pub i: usize,
    pub m: usize,
    pub rectangles: u64,
    pub fibers: usize,
    pub passed: bool,
    pub counterexample: Option<SignCounterexample>,
}

/// Checks that within every fiber of last-row projection between a pattern
/// `A` and a projected pattern `B`, the ratio `ε_c(rect) / ε_c(proj rect)`
/// is constant.
pub fn verify_sign_factorization(i: usize, m: usize) -> Result<SignFactorizationReport> {
    if i < 2 {
        return Err(Error::CannotProject);
    }
    let mut ratios: BTreeMap<(Pattern, Pattern), (i8, LatinRectangle)> = BTreeMap::new();
    let mut counterexample = None;
    let rectangles = enumerate_latin_rectangles(i, m, None, |rect| {
        if counterexample.is_some() {
            return;
        }
        let below = rect.project_last_row().expect("i >= 2");
        let ratio = rect.sign() * below.sign();
        let key = (rect.pattern(), below.pattern());
        match ratios.get(&key) {
            Some((seen, first)) if *seen != ratio => {
                counterexample = Some(SignCounterexample {
                    pattern: key.0.one_based(),
                    projected_pattern: key.1.one_based(),
                    first: first.one_based_rows(),
                    second: rect.one_based_rows(),
                });
            }
            Some(_) => {}
            None => {
                ratios.insert(key, (ratio, rect.clone()));
            }
        }
    })?;
    Ok(SignFactorizationReport {
        i,
        m,
        rectangles,
        fibers: ratios.len(),
        passed: counterexample.is_none(),
        counterexample,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ImbalancePropagation {
    pub i: usize,
    pub m: usize,
    pub imbalanced: bool,
    pub projected_imbalanced: bool,
    pub holds: bool,
}

/// If some `(i, m)` pattern has `#L+ != #L-`, some `(i-1, m)` pattern must too.
pub fn check_imbalance_propagation(i: usize, m: usize) -> Result<ImbalancePropagation> {
    if i < 2 {
        return Err(Error::CannotProject);
    }
    let imbalanced = signed_tally(i, m)?.has_imbalanced_pattern();
    let projected_imbalanced = signed_tally(i - 1, m)?.has_imbalanced_pattern();
    Ok(ImbalancePropagation {
        i,
        m,
        imbalanced,
        projected_imbalanced,
        holds: !imbalanced || projected_imbalanced,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcatenationReport {
    pub i: usize,
    pub m: usize,
    pub m_right: usize,
    pub pairs: u64,
    pub sign_multiplicative: bool,
    pub patterns_match: bool,
    pub bijective: bool,
}

impl ConcatenationReport {
    pub fn passed(&self) -> bool {
        self.sign_multiplicative && self.patterns_match && self.bijective
    }
}

/// Exhaustive check that concatenation multiplies column signs and maps
/// `L_A × L_B` bijectively onto `L_(A,B)`.
pub fn check_concatenation(i: usize, m: usize, m_right: usize) -> Result<ConcatenationReport> {
    let mut left = Vec::new();
    enumerate_latin_rectangles(i, m, None, |r| left.push(r.clone()))?;
    let mut right = Vec::new();
    enumerate_latin_rectangles(i, m_right, None, |r| right.push(r.clone()))?;

    let mut images: BTreeMap<Pattern, BTreeSet<LatinRectangle>> = BTreeMap::new();
    let mut pairs = 0u64;
    let mut sign_multiplicative = true;
    let mut patterns_match = true;
    for a in &left {
        for b in &right {
            let c = a.concatenate(b)?;
            pairs += 1;
            sign_multiplicative &= c.sign() == a.sign() * b.sign();
            let expected = a.pattern().concatenate(&b.pattern())?;
            patterns_match &= c.pattern() == expected;
            images.entry(expected).or_default().insert(c);
        }
    }
    let mut bijective = images.values().map(BTreeSet::len).sum::<usize>() as u64 == pairs;
    for (pattern, image) in &images {
        let mut fiber = BTreeSet::new();
        enumerate_latin_rectangles(i, m + m_right, Some(pattern), |r| {
            fiber.insert(r.clone());
        })?;
        bijective &= &fiber == image;
    }
    Ok(ConcatenationReport {
        i,
        m,
        m_right,
        pairs,
        sign_multiplicative,
        patterns_match,
        bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn small_tallies() {
        let t = signed_tally(2, 2).unwrap();
        assert_eq!(t.entries.len(), 1);
        let p = Pattern::from_one_based(2, &[vec![1, 2], vec![1, 2]]).unwrap();
        let c = t.get(&p).unwrap();
        assert_eq!((c.plus.clone(), c.minus.clone()), (BigUint::from(0u32), BigUint::from(2u32)));

        let t = signed_tally(1, 2).unwrap();
        assert_eq!(t.entries.len(), 2);
        for c in t.entries.values() {
            assert_eq!((c.plus.clone(), c.minus.clone()), (BigUint::from(1u32), BigUint::from(0u32)));
        }

        let t = signed_tally(1, 4).unwrap();
        assert_eq!(t.entries.len(), 24);
        assert_eq!(t.sum_of_squared_imbalances(), BigInt::from(24));
    }

    #[test]
    fn alon_tarsi_small() {
        assert_eq!(alon_tarsi_difference(1).unwrap(), BigInt::from(1));
        assert_eq!(alon_tarsi_difference(2).unwrap(), BigInt::from(-2));
        assert_eq!(alon_tarsi_difference(3).unwrap(), BigInt::from(0));
        assert!(alon_tarsi_difference(0).is_err());
    }

    #[test]
    fn sign_factorization_small() {
        for (i, m) in [(2, 2), (2, 3), (3, 4)] {
            let r = verify_sign_factorization(i, m).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(verify_sign_factorization(1, 3).is_err());
    }

    #[test]
    fn concatenation_exhaustive_small() {
        let r = check_concatenation(2, 2, 2).unwrap();
        assert_eq!(r.pairs, 4);
        assert!(r.passed());
    }

    #[test]
    fn tally_json_round_trip() {
        let t = signed_tally(2, 3).unwrap();
        let json = serde_json::to_string(&t.to_json()).unwrap();
        let back: TallyJson = serde_json::from_str(&json).unwrap();
        assert_eq!(SignedTally::from_json(&back).unwrap(), t);
        assert!(json.starts_with(r#"{"i":2,"m":3,"patterns":[{"pattern":[[1,2],"#));
    }
}
