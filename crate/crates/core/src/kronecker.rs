//! Symmetric-group characters via the Murnaghan–Nakayama rule, Kronecker
//! coefficients, and their symmetric-square refinement.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::factorial;

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    /// Parts in any order; zeros dropped.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Every part multiplied by `k`.
    pub fn scaled(&self, k: usize) -> Partition {
        Partition(self.0.iter().map(|p| p * k).collect())
    }

    /// `(d, …, d)` with `m` parts.
    pub fn rectangle(d: usize, m: usize) -> Partition {
        Partition::from_unsorted(vec![d; m])
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|k| self.0.iter().filter(|&&p| p >= k).count()).collect())
    }

    /// Dimension of the irreducible module by the hook length formula.
    pub fn dimension(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (r, &row) in self.0.iter().enumerate() {
            for c in 0..row {
                hooks *= BigInt::from(row - c + conj.0[c] - r - 1);
            }
        }
        factorial(self.size()) / hooks
    }

    /// Cycle type of the square of a permutation with this cycle type.
    pub fn squared_cycle_type(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.0.len() * 2);
        for &l in &self.0 {
            if l % 2 == 1 {
                parts.push(l);
            } else {
                parts.push(l / 2);
                parts.push(l / 2);
            }
        }
        Partition::from_unsorted(parts)
    }

    /// `Π_k k^{a_k} a_k!` where `a_k` counts parts equal to `k`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .into_iter()
            .fold(BigInt::one(), |acc, (k, a)| acc * BigInt::from(k).pow(a as u32) * factorial(a))
    }

    /// Size of the conjugacy class with this cycle type.
    pub fn class_size(&self) -> BigInt {
        factorial(self.size()) / self.centralizer_order()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in reverse lexicographic order, `(n)` first.
pub fn partitions(n: usize) -> Vec<Partition> {
    partitions_bounded(n, usize::MAX)
}

/// Partitions of `n` with at most `max_parts` parts.
pub fn partitions_bounded(n: usize, max_parts: usize) -> Vec<Partition> {
    fn go(left: usize, cap: usize, max_parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        for p in (1..=cap.min(left)).rev() {
            cur.push(p);
            go(left - p, p, max_parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

type Memo = HashMap<(Vec<usize>, Vec<usize>), i64>;

/// Beta-set of `λ` with `len` beads: `λ_j + len - 1 - j`.
fn beta_set(parts: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|j| parts.get(j).copied().unwrap_or(0) + len - 1 - j)
        .collect()
}

fn from_beta(beta: &[usize]) -> Vec<usize> {
    let mut sorted = beta.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let len = sorted.len();
    sorted
        .iter()
        .enumerate()
        .map(|(j, b)| b - (len - 1 - j))
        .filter(|&p| p > 0)
        .collect()
}

/// Border-strip recursion: strip `μ_1` cells off `λ` in every possible way.
fn mn(lambda: &[usize], mu: &[usize], memo: &mut Memo) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    if lambda.len() == 1 {
        // single row: trivial character
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = mu[0];
    let beta = beta_set(lambda, lambda.len());
    let mut total = 0i64;
    for (j, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut next = beta.clone();
        next[j] = b - r;
        let value = mn(&from_beta(&next), &mu[1..], memo);
        total += if height % 2 == 0 { value } else { -value };
    }
    memo.insert(key, total);
    total
}

/// `χ_λ` at the class of cycle type `μ`.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "|{lambda}| = {} but |{mu}| = {}",
            lambda.size(),
            mu.size()
        )));
    }
    Ok(mn(&lambda.0, &mu.0, &mut Memo::new()))
}

/// Full character table of `S_n`; rows are irreducibles, columns classes,
/// both indexed by `partitions(n)`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub n: usize,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
    pub class_sizes: Vec<BigInt>,
    index: HashMap<Partition, usize>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Self {
        let parts = partitions(n);
        let mut memo = Memo::new();
        let values = parts
            .iter()
            .map(|l| parts.iter().map(|c| mn(&l.0, &c.0, &mut memo)).collect())
            .collect();
        let class_sizes = parts.iter().map(Partition::class_size).collect();
        let index = parts.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        CharacterTable {
            n,
            partitions: parts,
            values,
            class_sizes,
            index,
        }
    }

    pub fn index_of(&self, p: &Partition) -> Result<usize> {
        self.index.get(p).copied().ok_or_else(|| {
            Error::SizeMismatch(format!("{p} is not a partition of {}", self.n))
        })
    }

    pub fn character(&self, lambda: &Partition, class: &Partition) -> Result<i64> {
        Ok(self.values[self.index_of(lambda)?][self.index_of(class)?])
    }

    /// Row and column orthogonality, checked exactly.
    pub fn check_orthogonality(&self) -> bool {
        let k = self.partitions.len();
        let order = factorial(self.n);
        let rows_ok = (0..k).into_par_iter().all(|a| {
            (0..k).all(|b| {
                let s: BigInt = (0..k)
                    .map(|c| &self.class_sizes[c] * self.values[a][c] * self.values[b][c])
                    .sum();
                s == if a == b { order.clone() } else { BigInt::zero() }
            })
        });
        let cols_ok = (0..k).into_par_iter().all(|c| {
            (0..k).all(|d| {
                let s: i128 = (0..k)
                    .map(|l| self.values[l][c] as i128 * self.values[l][d] as i128)
                    .sum();
                let expected = if c == d {
                    self.partitions[c].centralizer_order()
                } else {
                    BigInt::zero()
                };
                BigInt::from(s) == expected
            })
        });
        rows_ok && cols_ok
    }

    /// `(1/n!) Σ_C |C| term(C)`, which must be a nonnegative integer.
    fn class_average<F>(&self, what: &str, halve: bool, term: F) -> Result<BigInt>
    where
        F: Fn(usize) -> BigInt + Sync,
    {
        let sum: BigInt = (0..self.partitions.len())
            .into_par_iter()
            .map(|c| &self.class_sizes[c] * term(c))
            .sum();
        let mut denom = factorial(self.n);
        if halve {
            denom *= 2;
        }
        let (quot, rem) = sum.div_rem(&denom);
        if !rem.is_zero() || quot.is_negative() {
            return Err(Error::Internal(format!(
                "{what} is not a nonnegative integer: {sum}/{denom}"
            )));
        }
        Ok(quot)
    }

    pub fn kronecker(&self, l: &Partition, m: &Partition, n: &Partition) -> Result<BigInt> {
        let (a, b, c) = (self.index_of(l)?, self.index_of(m)?, self.index_of(n)?);
        self.class_average("Kronecker coefficient", false, |k| {
            BigInt::from(self.values[a][k]) * self.values[b][k] * self.values[c][k]
        })
    }

    /// Multiplicity of `W_λ` in the symmetric (`sign = 1`) or alternating
    /// (`sign = -1`) square of `W_μ`.
    fn square_part(&self, l: &Partition, mu: &Partition, sign: i64) -> Result<BigInt> {
        let (a, b) = (self.index_of(l)?, self.index_of(mu)?);
        let squares: Vec<usize> = self
            .partitions
            .iter()
            .map(|c| self.index_of(&c.squared_cycle_type()))
            .collect::<Result<_>>()?;
        self.class_average("square multiplicity", true, |k| {
            let chi = self.values[b][k];
            BigInt::from(self.values[a][k]) * (chi * chi + sign * self.values[b][squares[k]])
        })
    }

    pub fn symmetric_kronecker(&self, l: &Partition, mu: &Partition) -> Result<BigInt> {
        self.square_part(l, mu, 1)
    }

    pub fn alternating_kronecker(&self, l: &Partition, mu: &Partition) -> Result<BigInt> {
        self.square_part(l, mu, -1)
    }
}

fn common_size(ps: &[&Partition]) -> Result<usize> {
    let n = ps[0].size();
    if let Some(p) = ps.iter().find(|p| p.size() != n) {
        return Err(Error::SizeMismatch(format!("{p} has size {}, expected {n}", p.size())));
    }
    Ok(n)
}

pub fn kronecker_coeff(l: &Partition, m: &Partition, n: &Partition) -> Result<BigInt> {
    let size = common_size(&[l, m, n])?;
    CharacterTable::new(size).kronecker(l, m, n)
}

/// Multiplicity of `W_λ` in `S²(W_μ)`.
pub fn symmetric_kronecker_coeff(l: &Partition, mu: &Partition) -> Result<BigInt> {
    let size = common_size(&[l, mu])?;
    CharacterTable::new(size).symmetric_kronecker(l, mu)
}

/// Multiplicity of `W_λ` in `Λ²(W_μ)`.
pub fn alternating_kronecker_coeff(l: &Partition, mu: &Partition) -> Result<BigInt> {
    let size = common_size(&[l, mu])?;
    CharacterTable::new(size).alternating_kronecker(l, mu)
}

pub const DEFAULT_TABLE_BUDGET: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityEntry {
    pub lambda_bar: Partition,
    pub m_lambda_bar: Partition,
    pub sk: BigInt,
}

impl PositivityEntry {
    pub fn positive(&self) -> bool {
        self.sk.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    pub m: usize,
    pub d: usize,
    pub entries: Vec<PositivityEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityEntryJson {
    pub lambda_bar: Vec<usize>,
    pub m_lambda_bar: Vec<usize>,
    pub sk: String,
    pub positive: bool,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(PositivityEntry::positive)
    }

    pub fn to_json(&self) -> Vec<PositivityEntryJson> {
        self.entries
            .iter()
            .map(|e| PositivityEntryJson {
                lambda_bar: e.lambda_bar.0.clone(),
                m_lambda_bar: e.m_lambda_bar.0.clone(),
                sk: e.sk.to_string(),
                positive: e.positive(),
            })
            .collect()
    }
}

/// For each partition `λ̄` of `d` with at most `m` parts, the multiplicity of
/// `W_{mλ̄}` in `S²(W_{(d^m)})`.
pub fn check_corollary35(m: usize, d: usize) -> Result<PositivityReport> {
    check_corollary35_with(m, d, DEFAULT_TABLE_BUDGET)
}

pub fn check_corollary35_with(m: usize, d: usize, max_n: usize) -> Result<PositivityReport> {
    if m == 0 || d == 0 {
        return Err(Error::OutOfRange(format!("(m, d) = ({m}, {d})")));
    }
    let n = m * d;
    if n > max_n {
        return Err(Error::TooLarge {
            what: "character table",
            estimate: n as u128,
            cap: max_n as u128,
        });
    }
    let table = CharacterTable::new(n);
    let rect = Partition::rectangle(d, m);
    let entries = partitions_bounded(d, m)
        .into_iter()
        .map(|lb| {
            let big = lb.scaled(m);
            let sk = table.symmetric_kronecker(&big, &rect)?;
            Ok(PositivityEntry {
                lambda_bar: lb,
                m_lambda_bar: big,
                sk,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PositivityReport { m, d, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=12).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        assert_eq!(partitions(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        assert_eq!(partitions_bounded(4, 2).len(), 3);
    }

    #[test]
    fn partition_helpers() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 1]).dimension(), BigInt::from(2));
        assert_eq!(p(&[3, 2]).dimension(), BigInt::from(5));
        assert_eq!(p(&[4]).squared_cycle_type(), p(&[2, 2]));
        assert_eq!(p(&[3, 2]).squared_cycle_type(), p(&[3, 1, 1]));
        assert_eq!(p(&[2, 1]).class_size(), BigInt::from(3));
        assert_eq!(Partition::rectangle(2, 3), p(&[2, 2, 2]));
    }

    #[test]
    fn characters() {
        assert_eq!(mn_character(&p(&[1, 1]), &p(&[2])).unwrap(), -1);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[2, 1])).unwrap(), 0);
        for mu in partitions(6) {
            assert_eq!(mn_character(&p(&[6]), &mu).unwrap(), 1);
        }
        assert!(mn_character(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn character_degrees_match_hooks() {
        for n in 1..=9 {
            let table = CharacterTable::new(n);
            let id = p(&vec![1; n]);
            for l in &table.partitions {
                assert_eq!(BigInt::from(table.character(l, &id).unwrap()), l.dimension());
            }
        }
    }

    #[test]
    fn orthogonality_small() {
        for n in 1..=7 {
            assert!(CharacterTable::new(n).check_orthogonality(), "n = {n}");
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_coeff(&p(&[3]), &p(&[3]), &p(&[3])).unwrap(), BigInt::one());
        assert_eq!(kronecker_coeff(&p(&[1, 1]), &p(&[1, 1]), &p(&[2])).unwrap(), BigInt::one());
        assert_eq!(kronecker_coeff(&p(&[2]), &p(&[1, 1]), &p(&[1, 1])).unwrap(), BigInt::one());
        assert_eq!(symmetric_kronecker_coeff(&p(&[2]), &p(&[1, 1])).unwrap(), BigInt::one());
        assert_eq!(symmetric_kronecker_coeff(&p(&[1, 1]), &p(&[1, 1])).unwrap(), BigInt::zero());
        assert_eq!(symmetric_kronecker_coeff(&p(&[4]), &p(&[4])).unwrap(), BigInt::one());
        // S²(W_{(2,1)}) = trivial ⊕ W_{(2,1)}, Λ² = sign.
        assert_eq!(symmetric_kronecker_coeff(&p(&[2, 1]), &p(&[2, 1])).unwrap(), BigInt::one());
        assert_eq!(alternating_kronecker_coeff(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), BigInt::one());
        assert!(kronecker_coeff(&p(&[2]), &p(&[3]), &p(&[2])).is_err());
    }

    #[test]
    fn positivity_examples() {
        let r = check_corollary35(2, 1).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].m_lambda_bar, p(&[2]));
        assert_eq!(r.entries[0].sk, BigInt::one());
        assert!(check_corollary35(2, 2).unwrap().passed());
        assert!(check_corollary35(4, 1).unwrap().passed());
        assert!(check_corollary35(4, 4).unwrap_err().is_infeasible());
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert_eq!(text, r#"[{"lambda_bar":[1],"m_lambda_bar":[2],"sk":"1","positive":true}]"#);
    }
}
