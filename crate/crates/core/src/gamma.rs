//! The SL-invariant degree-`i` function on degree-`m` forms in `i` variables
//! built from the full polarization of `det^{m/2}` on `i × i` matrices.
//!
//! Evaluation at `f^{⊗i}` runs the chain: polarize `f` into a symmetric
//! multilinear form, read each consecutive pair of slots as an elementary
//! matrix (giving an element of `⊗^{m/2} M(i,i)`), take the `i`-th tensor
//! power, and apply the polarized `det^{m/2}` to each resulting list of
//! `i·m/2` matrices.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::HomPoly;
use crate::rational::{factorial, Rational};

/// Default cap on the number of determinant evaluations a single γ
/// evaluation may request.
pub const DEFAULT_DET_BUDGET: u128 = 1_000_000_000;

/// A scalar times a tensor product of `m/2` matrices of size `i × i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTensorTerm {
    pub coefficient: Rational,
    pub matrices: Vec<Matrix>,
}

/// Value of the polarization of `f` on `e_{l_1} ⊗ … ⊗ e_{l_m}` (0-based
/// symbols): `a_d · Π d_j! / m!` where `d` is the content of the sequence.
pub fn polarized_coefficient(f: &HomPoly, sequence: &[usize]) -> Result<Rational> {
    if sequence.len() != f.degree() {
        return Err(Error::Dimension(format!(
            "sequence has length {}, expected {}",
            sequence.len(),
            f.degree()
        )));
    }
    let mut content = vec![0u32; f.vars()];
    for &l in sequence {
        if l >= f.vars() {
            return Err(Error::OutOfRange(format!("symbol {} (of {})", l + 1, f.vars())));
        }
        content[l] += 1;
    }
    Ok(f.coefficient(&content) / HomPoly::multinomial(&content))
}

/// Every distinct sequence with the given content, in lexicographic order.
fn arrangements(content: &[u32]) -> Vec<Vec<usize>> {
    fn go(left: &mut [u32], remaining: usize, seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(seq.clone());
            return;
        }
        for j in 0..left.len() {
            if left[j] > 0 {
                left[j] -= 1;
                seq.push(j);
                go(left, remaining - 1, seq, out);
                seq.pop();
                left[j] += 1;
            }
        }
    }
    let mut left = content.to_vec();
    let total = content.iter().sum::<u32>() as usize;
    let mut out = Vec::new();
    go(&mut left, total, &mut Vec::with_capacity(total), &mut out);
    out
}

/// Nonzero `(sequence, polarized coefficient)` pairs in lexicographic order.
fn theta_sequences(f: &HomPoly) -> Vec<(Vec<usize>, Rational)> {
    let mut out = Vec::new();
    for (exp, coeff) in f.terms() {
        let c = coeff / HomPoly::multinomial(exp);
        for seq in arrangements(exp) {
            out.push((seq, c.clone()));
        }
    }
    out.sort();
    out
}

/// The image of `f` in `⊗^{m/2} M(i,i)`: one term
/// `c · E_{j1,k1} ⊗ … ⊗ E_{jm',km'}` per sequence `(j1,k1,…)` with nonzero
/// polarized coefficient `c`.
pub fn theta_image(f: &HomPoly) -> Result<Vec<MatrixTensorTerm>> {
    let m = f.degree();
    if !m.is_multiple_of(2) {
        return Err(Error::OddDegree(m));
    }
    let i = f.vars();
    Ok(theta_sequences(f)
        .into_iter()
        .map(|(seq, coefficient)| MatrixTensorTerm {
            coefficient,
            matrices: seq
                .chunks(2)
                .map(|p| Matrix::elementary(i, p[0], p[1]))
                .collect(),
        })
        .collect())
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n as usize) / (factorial(k as usize) * factorial((n - k) as usize))
}

/// Iterates every vector `c` with `0 <= c_j <= k_j`, calling `visit(c, w)`
/// with the inclusion–exclusion weight `w = Π (-1)^{k_j-c_j} C(k_j, c_j)`.
fn for_each_count_vector<F: FnMut(&[u32], &BigInt)>(k: &[u32], mut visit: F) {
    let mut c = vec![0u32; k.len()];
    loop {
        let weight = k.iter().zip(&c).fold(BigInt::one(), |acc, (&kj, &cj)| {
            let b = binomial(kj, cj);
            if (kj - cj) % 2 == 1 {
                acc * -b
            } else {
                acc * b
            }
        });
        visit(&c, &weight);
        let mut pos = 0;
        loop {
            if pos == k.len() {
                return;
            }
            if c[pos] < k[pos] {
                c[pos] += 1;
                break;
            }
            c[pos] = 0;
            pos += 1;
        }
    }
}

/// Full polarization of `X ↦ det(X)^{m'}` evaluated at `i·m'` matrices of
/// size `i × i`.
///
/// Equal arguments are grouped: with distinct matrices `Y_j` of multiplicity
/// `k_j`, the value is `(1/(i m')!) Σ_c Π_j (-1)^{k_j-c_j} C(k_j,c_j)
/// det(Σ_j c_j Y_j)^{m'}`, which reduces to subset inclusion–exclusion when
/// all arguments differ.
pub fn polarized_det_power(i: usize, m_half: usize, matrices: &[Matrix]) -> Result<Rational> {
    if matrices.len() != i * m_half {
        return Err(Error::SizeMismatch(format!(
            "expected {} matrices, got {}",
            i * m_half,
            matrices.len()
        )));
    }
    if let Some(bad) = matrices.iter().find(|x| x.rows() != i || x.cols() != i) {
        return Err(Error::SizeMismatch(format!(
            "expected {i}x{i} matrices, got {}x{}",
            bad.rows(),
            bad.cols()
        )));
    }
    let mut groups: Vec<(&Matrix, u32)> = Vec::new();
    for x in matrices {
        match groups.iter_mut().find(|(y, _)| *y == x) {
            Some(slot) => slot.1 += 1,
            None => groups.push((x, 1)),
        }
    }
    let counts: Vec<u32> = groups.iter().map(|g| g.1).collect();
    let mut total = Rational::zero();
    let mut error = None;
    for_each_count_vector(&counts, |c, weight| {
        if error.is_some() || c.iter().all(|&v| v == 0) {
            return;
        }
        let mut sum = Matrix::zeros(i, i);
        for ((y, _), &cj) in groups.iter().zip(c) {
            if cj > 0 {
                sum = &sum + &y.scale(&Rational::from_integer(cj.into()));
            }
        }
        match sum.det() {
            Ok(d) => {
                let mut p = Rational::one();
                for _ in 0..m_half {
                    p *= &d;
                }
                total += p * Rational::from_integer(weight.clone());
            }
            Err(e) => error = Some(e),
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(total / Rational::from_integer(factorial(i * m_half)))
}

/// Elementary-matrix positions with multiplicities; sorted for use as a key.
type PairMultiset = Vec<((u8, u8), u32)>;

fn multiset_of(pairs: &[(u8, u8)]) -> PairMultiset {
    let mut counts: BTreeMap<(u8, u8), u32> = BTreeMap::new();
    for &p in pairs {
        *counts.entry(p).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

/// Bareiss elimination in `i128`; `None` on overflow.
fn det_small(mut a: Vec<i128>, n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                a.swap(k * n + c, r * n + c);
            }
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = a[r * n + c]
                    .checked_mul(a[k * n + k])?
                    .checked_sub(a[r * n + k].checked_mul(a[k * n + c])?)?;
                a[r * n + c] = v / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

/// Determinant of `Σ c_j E_{p_j}`, falling back to big integers on overflow.
fn det_counts(i: usize, groups: &PairMultiset, c: &[u32]) -> BigInt {
    let mut a = vec![0i128; i * i];
    for (((r, col), _), &cj) in groups.iter().zip(c) {
        a[*r as usize * i + *col as usize] += cj as i128;
    }
    match det_small(a.clone(), i) {
        Some(d) => BigInt::from(d),
        None => {
            let rows: Vec<Vec<Rational>> = (0..i)
                .map(|r| {
                    (0..i)
                        .map(|c| Rational::from_integer(BigInt::from(a[r * i + c])))
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(rows).expect("square");
            m.det().expect("square").to_integer()
        }
    }
}

/// Polarized `det^{m'}` at a multiset of elementary matrices.
fn polarized_det_power_elementary(i: usize, m_half: usize, groups: &PairMultiset) -> Rational {
    let mut rows = vec![false; i];
    let mut cols = vec![false; i];
    for ((r, c), _) in groups {
        rows[*r as usize] = true;
        cols[*c as usize] = true;
    }
    if rows.iter().chain(&cols).any(|&hit| !hit) {
        return Rational::zero();
    }
    let counts: Vec<u32> = groups.iter().map(|g| g.1).collect();
    let mut total = BigInt::zero();
    for_each_count_vector(&counts, |c, weight| {
        let d = det_counts(i, groups, c);
        if !d.is_zero() {
            total += weight * num_traits::pow(d, m_half);
        }
    });
    Rational::new(total, factorial(i * m_half))
}

#[derive(Debug, Clone, Copy)]
pub struct GammaConfig {
    /// Cap on estimated determinant evaluations.
    pub det_budget: u128,
}

impl Default for GammaConfig {
    fn default() -> Self {
        GammaConfig {
            det_budget: DEFAULT_DET_BUDGET,
        }
    }
}

fn multiset_count(n: u128, k: u128) -> u128 {
    // C(n + k - 1, k), saturating
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.saturating_mul(n + j) / (j + 1);
    }
    acc
}

/// Merged θ-image terms keyed by their multiset of elementary matrices.
fn merged_terms(f: &HomPoly) -> Vec<(PairMultiset, Rational)> {
    let mut merged: BTreeMap<PairMultiset, Rational> = BTreeMap::new();
    for (seq, c) in theta_sequences(f) {
        let pairs: Vec<(u8, u8)> = seq.chunks(2).map(|p| (p[0] as u8, p[1] as u8)).collect();
        *merged.entry(multiset_of(&pairs)).or_insert_with(Rational::zero) += c;
    }
    merged.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Estimated determinant evaluations for `gamma_eval(m, i, f)`.
pub fn gamma_cost_estimate(m: usize, i: usize, f: &HomPoly) -> u128 {
    let terms = merged_terms(&f.restrict(i)).len() as u128;
    multiset_count(terms, i as u128).saturating_mul(1u128 << (i * m / 2).min(127))
}

/// `γ_{m,i}` evaluated at `f^{⊗i}`.
pub fn gamma_eval(m: usize, i: usize, f: &HomPoly) -> Result<Rational> {
    gamma_eval_with(m, i, f, &GammaConfig::default())
}

pub fn gamma_eval_with(m: usize, i: usize, f: &HomPoly, config: &GammaConfig) -> Result<Rational> {
    if !m.is_multiple_of(2) {
        return Err(Error::OddDegree(m));
    }
    if f.degree() != m {
        return Err(Error::Dimension(format!(
            "polynomial has degree {}, expected {m}",
            f.degree()
        )));
    }
    if i == 0 || i > f.vars() {
        return Err(Error::OutOfRange(format!("i = {i} (polynomial has {} variables)", f.vars())));
    }
    let f = f.restrict(i);
    let m_half = m / 2;
    let terms = merged_terms(&f);
    let estimate = multiset_count(terms.len() as u128, i as u128)
        .saturating_mul(1u128 << (i * m_half).min(127));
    if estimate > config.det_budget {
        return Err(Error::TooLarge {
            what: "γ evaluation",
            estimate,
            cap: config.det_budget,
        });
    }
    if terms.is_empty() {
        return Ok(Rational::zero());
    }
    let i_fact = factorial(i);
    let n = terms.len();
    let total = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut memo: HashMap<PairMultiset, Rational> = HashMap::new();
            let mut acc = Rational::zero();
            let mut idx = vec![first; i];
            loop {
                let mut pairs = Vec::with_capacity(i * m_half);
                let mut coeff = Rational::one();
                let mut mult_denom = BigInt::one();
                let mut run = 1usize;
                for (k, &t) in idx.iter().enumerate() {
                    for &(p, cnt) in &terms[t].0 {
                        pairs.extend(std::iter::repeat_n(p, cnt as usize));
                    }
                    coeff *= &terms[t].1;
                    if k > 0 && idx[k - 1] == t {
                        run += 1;
                        mult_denom *= BigInt::from(run);
                    } else {
                        run = 1;
                    }
                }
                let key = multiset_of(&pairs);
                let value = memo
                    .entry(key)
                    .or_insert_with_key(|key| polarized_det_power_elementary(i, m_half, key))
                    .clone();
                if !value.is_zero() {
                    acc += coeff * value * Rational::new(i_fact.clone(), mult_denom);
                }
                // next non-decreasing tuple with idx[0] fixed
                let mut pos = i;
                loop {
                    if pos == 1 {
                        return acc;
                    }
                    pos -= 1;
                    if idx[pos] + 1 < n {
                        let v = idx[pos] + 1;
                        for slot in idx.iter_mut().skip(pos) {
                            *slot = v;
                        }
                        break;
                    }
                }
            }
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(total)
}

/// `i! (m'!)^i / (i m')!`, the value at the `i`-fold power of `Σ_j λ_j^m`.
pub fn power_sum_closed_form(m: usize, i: usize) -> Rational {
    let m_half = m / 2;
    let num = factorial(i) * num_traits::pow(factorial(m_half), i);
    Rational::new(num, factorial(i * m_half))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumCheck {
    pub m: usize,
    pub i: usize,
    pub computed: Rational,
    pub closed_form: Rational,
}

impl PowerSumCheck {
    pub fn passed(&self) -> bool {
        self.computed == self.closed_form
    }
}

pub fn gamma_power_sum_check(m: usize, i: usize) -> Result<PowerSumCheck> {
    gamma_power_sum_check_with(m, i, &GammaConfig::default())
}

pub fn gamma_power_sum_check_with(m: usize, i: usize, config: &GammaConfig) -> Result<PowerSumCheck> {
    if !m.is_multiple_of(2) {
        return Err(Error::OddDegree(m));
    }
    if i == 0 || i > m {
        return Err(Error::OutOfRange(format!("i = {i} with m = {m}")));
    }
    let f = HomPoly::power_sum(i, m);
    Ok(PowerSumCheck {
        m,
        i,
        computed: gamma_eval_with(m, i, &f, config)?,
        closed_form: power_sum_closed_form(m, i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn lambda1_lambda2() -> HomPoly {
        HomPoly::from_terms(2, 2, vec![(vec![1, 1], qi(1))]).unwrap()
    }

    #[test]
    fn polarized_coefficients() {
        assert_eq!(polarized_coefficient(&lambda1_lambda2(), &[0, 1]).unwrap(), q(1, 2));
        let sq = HomPoly::power_sum(1, 2);
        assert_eq!(polarized_coefficient(&sq, &[0, 0]).unwrap(), qi(1));
        assert_eq!(polarized_coefficient(&HomPoly::zero(2, 2), &[0, 1]).unwrap(), qi(0));
        assert!(polarized_coefficient(&sq, &[0, 1]).is_err());
        assert!(polarized_coefficient(&sq, &[0]).is_err());
    }

    #[test]
    fn theta_images() {
        let terms = theta_image(&lambda1_lambda2()).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].coefficient, q(1, 2));
        assert_eq!(terms[0].matrices, vec![Matrix::elementary(2, 0, 1)]);
        assert_eq!(terms[1].matrices, vec![Matrix::elementary(2, 1, 0)]);
        let terms = theta_image(&HomPoly::power_sum(1, 2)).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coefficient, qi(1));
        assert!(matches!(
            theta_image(&HomPoly::power_sum(2, 3)),
            Err(Error::OddDegree(3))
        ));
    }

    #[test]
    fn polarized_det_examples() {
        let id = Matrix::identity(2);
        assert_eq!(polarized_det_power(2, 1, &[id.clone(), id]).unwrap(), qi(1));
        let e11 = Matrix::elementary(2, 0, 0);
        let e22 = Matrix::elementary(2, 1, 1);
        assert_eq!(polarized_det_power(2, 1, &[e11, e22]).unwrap(), q(1, 2));
        let x = Matrix::from_rows(vec![vec![q(0, 1), q(1, 2)], vec![q(1, 2), q(0, 1)]]).unwrap();
        assert_eq!(polarized_det_power(2, 1, &[x.clone(), x]).unwrap(), q(-1, 4));
        assert!(polarized_det_power(2, 1, &[Matrix::identity(2)]).is_err());
        assert!(polarized_det_power(2, 1, &[Matrix::identity(3), Matrix::identity(3)]).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_eval(2, 1, &HomPoly::power_sum(1, 2)).unwrap(), qi(1));
        assert_eq!(gamma_eval(2, 2, &lambda1_lambda2()).unwrap(), q(-1, 4));
        let l1sq = HomPoly::from_terms(2, 2, vec![(vec![2, 0], qi(1))]).unwrap();
        assert_eq!(gamma_eval(2, 2, &l1sq).unwrap(), qi(0));
        assert!(matches!(
            gamma_eval(3, 1, &HomPoly::power_sum(1, 3)),
            Err(Error::OddDegree(3))
        ));
        assert!(gamma_eval(2, 3, &lambda1_lambda2()).is_err());
    }

    #[test]
    fn elementary_path_matches_general_path() {
        let groups = multiset_of(&[(0, 1), (1, 0), (0, 1), (1, 0)]);
        let fast = polarized_det_power_elementary(2, 2, &groups);
        let mats = vec![
            Matrix::elementary(2, 0, 1),
            Matrix::elementary(2, 1, 0),
            Matrix::elementary(2, 0, 1),
            Matrix::elementary(2, 1, 0),
        ];
        assert_eq!(fast, polarized_det_power(2, 2, &mats).unwrap());
    }

    #[test]
    fn power_sum_values() {
        assert_eq!(power_sum_closed_form(2, 2), qi(1));
        assert_eq!(power_sum_closed_form(4, 2), q(1, 3));
        assert_eq!(power_sum_closed_form(2, 1), qi(1));
        for (m, i) in [(2, 1), (2, 2), (4, 1), (4, 2)] {
            assert!(gamma_power_sum_check(m, i).unwrap().passed());
        }
    }

    #[test]
    fn budget_guard() {
        let f = HomPoly::power_sum(2, 4);
        let err = gamma_eval_with(4, 2, &f, &GammaConfig { det_budget: 3 }).unwrap_err();
        assert!(err.is_infeasible());
    }
}
