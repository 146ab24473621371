//! Sparse rational tensors over the alphabet `[m]`, Young symmetrizers of
//! tableaux, and the pairings that tie symmetrized tensors to signed Latin
//! rectangle counts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::signed_tally;
use crate::perm::{all_permutations, sign};
use crate::rational::{factorial, pow, Rational, RationalJson};

/// Tensor of rank `k` over the alphabet `[m]`, stored as a map from index
/// sequences (0-based symbols) to nonzero coefficients. The same type serves
/// for dual and primal tensors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseTensor {
    rank: usize,
    m: usize,
    entries: BTreeMap<Vec<u8>, Rational>,
}

impl SparseTensor {
    pub fn zero(rank: usize, m: usize) -> Self {
        SparseTensor {
            rank,
            m,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a tensor from 0-based index sequences; repeated indices add up.
    pub fn from_entries<I>(rank: usize, m: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, Rational)>,
    {
        let mut acc: HashMap<Vec<u8>, Rational> = HashMap::new();
        for (idx, c) in entries {
            if idx.len() != rank || idx.iter().any(|&s| s as usize >= m) {
                return Err(Error::Dimension(format!(
                    "index {idx:?} is not a length-{rank} sequence over {m} symbols"
                )));
            }
            *acc.entry(idx).or_insert_with(Rational::zero) += c;
        }
        Ok(Self::from_map(rank, m, acc))
    }

    fn from_map(rank: usize, m: usize, acc: HashMap<Vec<u8>, Rational>) -> Self {
        SparseTensor {
            rank,
            m,
            entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &Rational)> {
        self.entries.iter()
    }

    pub fn get(&self, idx: &[u8]) -> Rational {
        self.entries.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, factor: &Rational) -> SparseTensor {
        if factor.is_zero() {
            return SparseTensor::zero(self.rank, self.m);
        }
        SparseTensor {
            rank: self.rank,
            m: self.m,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }

    pub fn tensor(&self, other: &SparseTensor) -> Result<SparseTensor> {
        if self.m != other.m {
            return Err(Error::AlphabetMismatch {
                left: self.m,
                right: other.m,
            });
        }
        let mut entries = BTreeMap::new();
        for (a, ca) in &self.entries {
            for (b, cb) in &other.entries {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                entries.insert(idx, ca * cb);
            }
        }
        Ok(SparseTensor {
            rank: self.rank + other.rank,
            m: self.m,
            entries,
        })
    }

    pub fn tensor_power(&self, n: usize) -> Result<SparseTensor> {
        let mut out = SparseTensor::from_entries(0, self.m, [(vec![], Rational::one())])?;
        for _ in 0..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// Moves the factor in slot `s` to slot `perm[s]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<SparseTensor> {
        check_slot_perm(perm, self.rank)?;
        Ok(SparseTensor {
            rank: self.rank,
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(idx, c)| (permuted(idx, perm), c.clone()))
                .collect(),
        })
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            rank: self.rank,
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(idx, c)| {
                    let r = RationalJson::from(c);
                    TensorEntryJson {
                        idx: idx.iter().map(|&s| s as usize + 1).collect(),
                        num: r.num,
                        den: r.den,
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &TensorJson) -> Result<Self> {
        let entries = json
            .entries
            .iter()
            .map(|e| {
                let idx = e
                    .idx
                    .iter()
                    .map(|&s| {
                        if s == 0 || s > json.m || s > 256 {
                            Err(Error::Parse(format!("symbol {s} outside 1..={}", json.m)))
                        } else {
                            Ok((s - 1) as u8)
                        }
                    })
                    .collect::<Result<Vec<u8>>>()?;
                let c = RationalJson {
                    num: e.num.clone(),
                    den: e.den.clone(),
                }
                .to_rational()?;
                Ok((idx, c))
            })
            .collect::<Result<Vec<_>>>()?;
        SparseTensor::from_entries(json.rank, json.m, entries)
    }
}

fn permuted(idx: &[u8], perm: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; idx.len()];
    for (s, &sym) in idx.iter().enumerate() {
        out[perm[s]] = sym;
    }
    out
}

fn check_slot_perm(perm: &[usize], rank: usize) -> Result<()> {
    if perm.len() != rank || !crate::perm::is_permutation(perm) {
        return Err(Error::Dimension(format!(
            "{perm:?} is not a permutation of {rank} slots"
        )));
    }
    Ok(())
}

/// Dump format `{"rank", "m", "entries": [{"idx", "num", "den"}]}` with
/// 1-based symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub rank: usize,
    pub m: usize,
    pub entries: Vec<TensorEntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorEntryJson {
    pub idx: Vec<usize>,
    pub num: String,
    pub den: String,
}

fn symmetric_average(m: usize) -> SparseTensor {
    let c = Rational::new(BigInt::one(), factorial(m));
    let entries = all_permutations(m)
        .into_iter()
        .map(|p| (p.into_iter().map(|s| s as u8).collect(), c.clone()));
    SparseTensor::from_entries(m, m, entries).expect("permutations are valid indices")
}

/// Dual-side average of `v*_{σ(1)} ⊗ … ⊗ v*_{σ(m)}` over all `σ`.
pub fn make_v_o(m: usize) -> SparseTensor {
    symmetric_average(m)
}

/// Primal-side average of `v_{σ(1)} ⊗ … ⊗ v_{σ(m)}` over all `σ`.
pub fn make_frak_v_o(m: usize) -> SparseTensor {
    symmetric_average(m)
}

/// `Σ_idx dual[idx] · primal[idx]`.
pub fn pairing(dual: &SparseTensor, primal: &SparseTensor) -> Result<Rational> {
    if dual.rank != primal.rank {
        return Err(Error::RankMismatch {
            left: dual.rank,
            right: primal.rank,
        });
    }
    if dual.m != primal.m {
        return Err(Error::AlphabetMismatch {
            left: dual.m,
            right: primal.m,
        });
    }
    let (small, large) = if dual.len() <= primal.len() {
        (dual, primal)
    } else {
        (primal, dual)
    };
    Ok(small
        .entries
        .iter()
        .filter_map(|(idx, c)| large.entries.get(idx).map(|d| c * d))
        .sum())
}

/// Young tableau with 1-based cell contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    shape: Vec<usize>,
    filling: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(filling: Vec<Vec<usize>>) -> Result<Self> {
        let shape: Vec<usize> = filling.iter().map(Vec::len).collect();
        if shape.windows(2).any(|w| w[0] < w[1]) || shape.contains(&0) {
            return Err(Error::Dimension(format!("{shape:?} is not a partition")));
        }
        let cells: usize = shape.iter().sum();
        let mut seen = vec![false; cells + 1];
        for &v in filling.iter().flatten() {
            if v == 0 || v > cells || seen[v] {
                return Err(Error::Dimension(format!(
                    "filling must use each of 1..={cells} once"
                )));
            }
            seen[v] = true;
        }
        Ok(Tableau { shape, filling })
    }

    /// Row-reading tableau of shape `m^i`: cell `(p, q)` holds `p·m + q + 1`.
    pub fn row_reading(i: usize, m: usize) -> Self {
        Tableau {
            shape: vec![m; i],
            filling: (0..i)
                .map(|p| (1..=m).map(|q| p * m + q).collect())
                .collect(),
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> usize {
        self.shape.iter().sum()
    }

    /// Slot sets (0-based) of the rows.
    fn row_blocks(&self) -> Vec<Vec<usize>> {
        self.filling
            .iter()
            .map(|r| r.iter().map(|v| v - 1).collect())
            .collect()
    }

    fn column_blocks(&self) -> Vec<Vec<usize>> {
        (0..self.shape.first().copied().unwrap_or(0))
            .map(|c| {
                self.filling
                    .iter()
                    .filter(|r| r.len() > c)
                    .map(|r| r[c] - 1)
                    .collect()
            })
            .collect()
    }
}

/// Slot permutation (`perm[s]` is the image of slot `s`) with a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGroupElement {
    pub perm: Vec<usize>,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct SymmetrizerConfig {
    /// Largest row or column group that may be listed explicitly.
    pub group_cap: u128,
}

impl Default for SymmetrizerConfig {
    fn default() -> Self {
        SymmetrizerConfig {
            group_cap: 1_000_000,
        }
    }
}

fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, k| a.saturating_mul(k))
}

/// Product of the full symmetric groups on disjoint slot blocks.
fn block_group(blocks: &[Vec<usize>], k: usize, signed: bool, cap: u128) -> Result<Vec<SignedGroupElement>> {
    let order = blocks
        .iter()
        .fold(1u128, |a, b| a.saturating_mul(factorial_u128(b.len())));
    if order > cap {
        return Err(Error::TooLarge {
            what: "symmetrizer",
            estimate: order,
            cap,
        });
    }
    let mut out = vec![SignedGroupElement {
        perm: (0..k).collect(),
        sign: 1,
    }];
    for block in blocks {
        let local = all_permutations(block.len());
        let mut next = Vec::with_capacity(out.len() * local.len());
        for g in &out {
            for p in &local {
                let mut perm = g.perm.clone();
                for (a, &b) in p.iter().enumerate() {
                    perm[block[a]] = block[b];
                }
                let s = if signed { sign(p) } else { 1 };
                next.push(SignedGroupElement {
                    perm,
                    sign: g.sign * s,
                });
            }
        }
        out = next;
    }
    Ok(out)
}

/// Permutations preserving every row, all with sign `+1`.
pub fn row_group(t: &Tableau, config: &SymmetrizerConfig) -> Result<Vec<SignedGroupElement>> {
    block_group(&t.row_blocks(), t.cells(), false, config.group_cap)
}

/// Permutations preserving every column, each carrying its sign.
pub fn col_group(t: &Tableau, config: &SymmetrizerConfig) -> Result<Vec<SignedGroupElement>> {
    block_group(&t.column_blocks(), t.cells(), true, config.group_cap)
}

fn apply_group_sum(group: &[SignedGroupElement], x: &SparseTensor) -> SparseTensor {
    let acc = group
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Vec<u8>, Rational>, g| {
            for (idx, c) in &x.entries {
                let slot = acc.entry(permuted(idx, &g.perm)).or_insert_with(Rational::zero);
                if g.sign > 0 {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert_with(Rational::zero) += v;
            }
            a
        });
    SparseTensor::from_map(x.rank, x.m, acc)
}

/// `(Σ_col ε(μ) μ)(Σ_row σ) · x`.
pub fn apply_symmetrizer(t: &Tableau, x: &SparseTensor) -> Result<SparseTensor> {
    apply_symmetrizer_with(t, x, &SymmetrizerConfig::default())
}

pub fn apply_symmetrizer_with(
    t: &Tableau,
    x: &SparseTensor,
    config: &SymmetrizerConfig,
) -> Result<SparseTensor> {
    if x.rank != t.cells() {
        return Err(Error::RankMismatch {
            left: t.cells(),
            right: x.rank,
        });
    }
    let rows = row_group(t, config)?;
    let cols = col_group(t, config)?;
    let y = apply_group_sum(&rows, x);
    Ok(apply_group_sum(&cols, &y))
}

fn check_shape(i: usize, m: usize) -> Result<()> {
    if m == 0 || i == 0 {
        return Err(Error::OutOfRange(format!("(i, m) = ({i}, {m})")));
    }
    if i > m {
        return Err(Error::TooManyRows { i, m });
    }
    if m > 64 {
        return Err(Error::OutOfRange(format!("m = {m}")));
    }
    Ok(())
}

fn inv_factorial_pow(m: usize, e: usize) -> Rational {
    pow(&Rational::new(BigInt::one(), factorial(m)), e)
}

/// Left side by materializing the symmetrized tensor with explicit row and
/// column groups. Refused when `(m!)^i (i!)^m` exceeds `cap`.
pub fn prop20_lhs_full(i: usize, m: usize, cap: u128) -> Result<Rational> {
    check_shape(i, m)?;
    let estimate = factorial_u128(m)
        .saturating_pow(i as u32)
        .saturating_mul(factorial_u128(i).saturating_pow(m as u32));
    if estimate > cap {
        return Err(Error::TooLarge {
            what: "full symmetrizer expansion",
            estimate,
            cap,
        });
    }
    let primal = make_frak_v_o(m).tensor_power(i)?;
    let dual = make_v_o(m).tensor_power(i)?;
    let t = Tableau::row_reading(i, m);
    let config = SymmetrizerConfig { group_cap: cap };
    pairing(&dual, &apply_symmetrizer_with(&t, &primal, &config)?)
}

pub const DEFAULT_LATIN_BUDGET: u128 = 1_000_000_000_000;

/// Left side via the Latin-restricted expansion: only arrays whose rows are
/// permutations and whose columns are repetition-free survive the column
/// antisymmetrization, so the sum runs over Latin rectangles `X` and, for
/// each, over column rearrangements `μ` keeping every row a permutation.
pub fn prop20_lhs(i: usize, m: usize) -> Result<Rational> {
    prop20_lhs_with(i, m, DEFAULT_LATIN_BUDGET)
}

pub fn prop20_lhs_with(i: usize, m: usize, budget: u128) -> Result<Rational> {
    check_shape(i, m)?;
    let estimate = factorial_u128(m)
        .saturating_pow(i as u32)
        .saturating_mul(factorial_u128(i).saturating_pow(m as u32));
    if estimate > budget {
        return Err(Error::TooLarge {
            what: "Latin-restricted expansion",
            estimate,
            cap: budget,
        });
    }
    let firsts = all_permutations(m);
    let total: i128 = firsts
        .par_iter()
        .map(|first| {
            let mut rows: Vec<Vec<u8>> = vec![first.iter().map(|&s| s as u8).collect()];
            let mut col_used: Vec<u64> = rows[0].iter().map(|&s| 1u64 << s).collect();
            let mut acc = 0i128;
            outer_rows(i, m, &mut rows, &mut col_used, &mut acc);
            acc
        })
        .sum();
    Ok(Rational::from_integer(BigInt::from(total)) * inv_factorial_pow(m, i))
}

fn outer_rows(i: usize, m: usize, rows: &mut Vec<Vec<u8>>, col_used: &mut [u64], acc: &mut i128) {
    if rows.len() == i {
        *acc += column_rearrangement_sum(rows, m);
        return;
    }
    let mut row = Vec::with_capacity(m);
    outer_cells(i, m, rows, col_used, &mut row, 0, acc);
}

fn outer_cells(
    i: usize,
    m: usize,
    rows: &mut Vec<Vec<u8>>,
    col_used: &mut [u64],
    row: &mut Vec<u8>,
    row_used: u64,
    acc: &mut i128,
) {
    let c = row.len();
    if c == m {
        rows.push(row.clone());
        outer_rows(i, m, rows, col_used, acc);
        rows.pop();
        return;
    }
    for s in 0..m as u8 {
        let bit = 1u64 << s;
        if row_used & bit != 0 || col_used[c] & bit != 0 {
            continue;
        }
        col_used[c] |= bit;
        row.push(s);
        outer_cells(i, m, rows, col_used, row, row_used | bit, acc);
        row.pop();
        col_used[c] &= !bit;
    }
}

/// `Σ_μ ε(μ)` over column rearrangements of `x` with every row a permutation.
fn column_rearrangement_sum(x: &[Vec<u8>], m: usize) -> i128 {
    let i = x.len();
    let mut row_used = vec![0u64; i];
    rearrange(x, m, 0, 0, &mut row_used, 0, 0)
}

/// Fills target row `r` of column `c` from some unused source row; `taken`
/// marks used sources in the current column, `parity` counts inversions.
fn rearrange(x: &[Vec<u8>], m: usize, c: usize, r: usize, row_used: &mut [u64], taken: u32, parity: u32) -> i128 {
    let i = x.len();
    if c == m {
        return if parity.is_multiple_of(2) { 1 } else { -1 };
    }
    if r == i {
        return rearrange(x, m, c + 1, 0, row_used, 0, parity);
    }
    let mut total = 0;
    for src in 0..i {
        if taken & (1 << src) != 0 {
            continue;
        }
        let bit = 1u64 << x[src][c];
        if row_used[r] & bit != 0 {
            continue;
        }
        let inversions = (taken >> (src + 1)).count_ones();
        row_used[r] |= bit;
        total += rearrange(x, m, c, r + 1, row_used, taken | (1 << src), parity + inversions);
        row_used[r] &= !bit;
    }
    total
}

/// Right side: `(1/m!)^i Σ_patterns (plus - minus)²` from the signed tally.
pub fn prop20_rhs(i: usize, m: usize) -> Result<Rational> {
    check_shape(i, m)?;
    let tally = signed_tally(i, m)?;
    Ok(Rational::from_integer(tally.sum_of_squared_imbalances()) * inv_factorial_pow(m, i))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop20Report {
    pub i: usize,
    pub m: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    /// Left side through the explicit group expansion, when within the cap.
    pub lhs_full: Option<Rational>,
}

impl Prop20Report {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs && self.lhs_full.as_ref().is_none_or(|f| *f == self.lhs)
    }

    pub fn to_json(&self) -> Prop20Json {
        Prop20Json {
            i: self.i,
            m: self.m,
            lhs: RationalJson::from(&self.lhs),
            rhs: RationalJson::from(&self.rhs),
            lhs_full: self.lhs_full.as_ref().map(RationalJson::from),
            verdict: if self.passed() { "equal" } else { "different" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop20Json {
    pub i: usize,
    pub m: usize,
    pub lhs: RationalJson,
    pub rhs: RationalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_full: Option<RationalJson>,
    pub verdict: String,
}

pub const DEFAULT_FULL_CAP: u128 = 1_000_000;

/// Both sides of the pairing identity, plus the full expansion when small.
pub fn prop20_check(i: usize, m: usize) -> Result<Prop20Report> {
    let lhs = prop20_lhs(i, m)?;
    let rhs = prop20_rhs(i, m)?;
    let lhs_full = match prop20_lhs_full(i, m, DEFAULT_FULL_CAP) {
        Ok(v) => Some(v),
        Err(e) if e.is_infeasible() => None,
        Err(e) => return Err(e),
    };
    Ok(Prop20Report {
        i,
        m,
        lhs,
        rhs,
        lhs_full,
    })
}

/// `Σ ε(μ)` over `μ ∈ S_m^m` such that the square with column `q` equal to
/// `μ_q` is Latin, by a column-by-column search.
pub fn latin_sign_sum_pairing(m: usize) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::OutOfRange("m = 0".into()));
    }
    if m > 6 {
        return Err(Error::TooLarge {
            what: "sign-sum search",
            estimate: factorial_u128(m).saturating_pow(m as u32),
            cap: factorial_u128(6).pow(6),
        });
    }
    let firsts = all_permutations(m);
    let total: i128 = firsts
        .par_iter()
        .map(|first| {
            let mut row_used: Vec<u64> = first.iter().map(|&s| 1u64 << s).collect();
            let s = sign(first) as i128;
            s * column_search(m, 1, 0, &mut row_used, 0, 0)
        })
        .sum();
    Ok(BigInt::from(total))
}

/// Column `c` is built top to bottom; `parity` counts inversions of the
/// columns completed so far plus the partial current one.
fn column_search(m: usize, c: usize, r: usize, row_used: &mut [u64], col_mask: u64, parity: u32) -> i128 {
    if c == m {
        return if parity.is_multiple_of(2) { 1 } else { -1 };
    }
    if r == m {
        return column_search(m, c + 1, 0, row_used, 0, parity);
    }
    let mut total = 0;
    for s in 0..m {
        let bit = 1u64 << s;
        if col_mask & bit != 0 || row_used[r] & bit != 0 {
            continue;
        }
        let inversions = (col_mask >> (s + 1)).count_ones();
        row_used[r] |= bit;
        total += column_search(m, c, r + 1, row_used, col_mask | bit, parity + inversions);
        row_used[r] &= !bit;
    }
    total
}

/// `S(B_o(m, m)) · v_{B_o}` where `v_{B_o}` has symbol `p` throughout row `p`.
pub fn symmetrized_constant_rows(m: usize, config: &SymmetrizerConfig) -> Result<SparseTensor> {
    let idx: Vec<u8> = (0..m).flat_map(|p| std::iter::repeat_n(p as u8, m)).collect();
    let v = SparseTensor::from_entries(m * m, m, [(idx, Rational::one())])?;
    apply_symmetrizer_with(&Tableau::row_reading(m, m), &v, config)
}

/// The sign-sum pairing computed through explicit tensors.
pub fn latin_sign_sum_pairing_tensor(m: usize, config: &SymmetrizerConfig) -> Result<Rational> {
    let w = symmetrized_constant_rows(m, config)?;
    pairing(&make_v_o(m).tensor_power(m)?, &w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslateValue {
    pub tau: Vec<usize>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslateScanReport {
    pub m: usize,
    pub d: BigInt,
    pub values: Vec<TranslateValue>,
    /// Indices into `values` outside `{0, ±d}`.
    pub violations: Vec<usize>,
}

impl TranslateScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> TranslateScanJson {
        TranslateScanJson {
            m: self.m,
            d: self.d.to_string(),
            scanned: self.values.len(),
            values: self
                .values
                .iter()
                .map(|v| TranslateValueJson {
                    tau: v.tau.iter().map(|s| s + 1).collect(),
                    value: RationalJson::from(&v.value),
                })
                .collect(),
            violations: self.violations.clone(),
            passed: self.passed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslateScanJson {
    pub m: usize,
    pub d: String,
    pub scanned: usize,
    pub values: Vec<TranslateValueJson>,
    pub violations: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslateValueJson {
    pub tau: Vec<usize>,
    pub value: RationalJson,
}

/// Pairs `v_o^{⊗m}` with slot translates `τ · S(B_o) v_{B_o}` and flags
/// values outside `{0, ±D}`, where `D` is the sign-sum pairing.
pub fn translate_pairing_scan(m: usize, taus: &[Vec<usize>]) -> Result<TranslateScanReport> {
    let config = SymmetrizerConfig::default();
    let d = latin_sign_sum_pairing(m)?;
    let w = symmetrized_constant_rows(m, &config)?;
    let dual = make_v_o(m).tensor_power(m)?;
    let values = taus
        .par_iter()
        .map(|tau| {
            let value = pairing(&dual, &w.permute_slots(tau)?)?;
            Ok(TranslateValue {
                tau: tau.clone(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let allowed = [BigInt::zero(), d.clone(), -d.clone()];
    let violations = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !(v.value.is_integer() && allowed.contains(v.value.numer())))
        .map(|(k, _)| k)
        .collect();
    Ok(TranslateScanReport {
        m,
        d,
        values,
        violations,
    })
}

/// Every slot permutation at `m = 2`.
pub fn translate_scan_exhaustive(m: usize) -> Result<TranslateScanReport> {
    let k = m * m;
    if k > 9 {
        return Err(Error::TooLarge {
            what: "exhaustive translate scan",
            estimate: factorial_u128(k),
            cap: factorial_u128(9),
        });
    }
    translate_pairing_scan(m, &all_permutations(k))
}

/// `samples` slot permutations drawn from a seeded generator.
pub fn translate_scan_sampled(m: usize, samples: usize, seed: u64) -> Result<TranslateScanReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taus: Vec<Vec<usize>> = (0..samples)
        .map(|_| {
            let mut p: Vec<usize> = (0..m * m).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    translate_pairing_scan(m, &taus)
}

/// Converts an exact integer pairing to `i128` when it fits.
pub fn as_integer(value: &Rational) -> Option<i128> {
    value.is_integer().then(|| value.numer().to_i128()).flatten()
}
