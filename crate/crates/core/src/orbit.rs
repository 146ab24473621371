//! Points of the determinant and permanent orbit closures restricted to the
//! span of the first `i` diagonal basis vectors, and the search for a point
//! where γ does not vanish.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma_eval_with, GammaConfig};
use crate::matrix::Matrix;
use crate::perm::{all_permutations, sign};
use crate::poly::HomPoly;
use crate::rational::{factorial, format_rational, Rational, RationalJson};

/// Permanent by Ryser's inclusion–exclusion with a Gray-code walk over
/// column subsets. Rows are scaled to integers first.
pub fn permanent(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    if n > 30 {
        return Err(Error::TooLarge {
            what: "permanent",
            estimate: 1u128 << n,
            cap: 1 << 30,
        });
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let lcm = m.row(r).iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        a.push(m.row(r).iter().map(|v| v.numer() * (&lcm / v.denom())).collect());
        scale *= lcm;
    }
    let mut row_sums = vec![BigInt::zero(); n];
    let mut in_set = vec![false; n];
    let mut total = BigInt::zero();
    let mut size = 0usize;
    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        if in_set[col] {
            in_set[col] = false;
            size -= 1;
            for r in 0..n {
                row_sums[r] -= &a[r][col];
            }
        } else {
            in_set[col] = true;
            size += 1;
            for r in 0..n {
                row_sums[r] += &a[r][col];
            }
        }
        let prod = row_sums.iter().fold(BigInt::one(), |acc, s| acc * s);
        if (n - size).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(Rational::new(total, scale))
}

/// `Σ_σ Π_r a_{r,σ(r)}` by direct expansion over all permutations.
pub fn permanent_naive(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    Ok(all_permutations(n)
        .iter()
        .map(|p| (0..n).fold(Rational::one(), |acc, r| acc * &m[(r, p[r])]))
        .sum())
}

/// An `m × i` matrix `A`; column `j` gives the image of the `j`-th basis
/// vector `e_j = v_j ⊗ v_j*` as `Σ_p a_{p,j} e_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionMatrix(Matrix);

impl RestrictionMatrix {
    pub fn new(a: Matrix) -> Result<Self> {
        let (m, i) = (a.rows(), a.cols());
        if i == 0 || i > m {
            return Err(Error::Dimension(format!(
                "restriction matrix must be m x i with 1 <= i <= m, got {m}x{i}"
            )));
        }
        Ok(RestrictionMatrix(a))
    }

    pub fn m(&self) -> usize {
        self.0.rows()
    }

    pub fn i(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Linear form `Σ_j a_{p,j} λ_j` for row `p`.
    fn row_form(&self, p: usize) -> HomPoly {
        HomPoly::linear_form(self.0.row(p))
    }

    /// The `m × m` matrix `A^{(d)}` repeating column `j` exactly `d_j` times.
    pub fn column_repeated(&self, d: &[u32]) -> Result<Matrix> {
        if d.len() != self.i() {
            return Err(Error::Dimension(format!(
                "content has length {}, expected {}",
                d.len(),
                self.i()
            )));
        }
        let total: u32 = d.iter().sum();
        if total as usize != self.m() {
            return Err(Error::Dimension(format!(
                "content sums to {total}, expected {}",
                self.m()
            )));
        }
        let cols: Vec<usize> = d
            .iter()
            .enumerate()
            .flat_map(|(j, &dj)| std::iter::repeat_n(j, dj as usize))
            .collect();
        let rows = (0..self.m())
            .map(|p| cols.iter().map(|&j| self.0[(p, j)].clone()).collect())
            .collect();
        Matrix::from_rows(rows)
    }
}

/// Where each ambient basis vector `e_p` (p < m) sits as an `m × m` matrix
/// position. Only the diagonal layout `e_p = v_p ⊗ v_p*` is supported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisImage(pub Vec<(usize, usize)>);

impl BasisImage {
    pub fn diagonal(m: usize) -> Self {
        BasisImage((0..m).map(|p| (p, p)).collect())
    }

    fn is_diagonal(&self) -> bool {
        self.0.iter().enumerate().all(|(p, &(r, c))| r == p && c == p)
    }
}

/// Leibniz expansion of a matrix of polynomials, skipping zero entries.
fn expand_forms(entries: &[Vec<HomPoly>], signed: bool) -> HomPoly {
    let n = entries.len();
    let vars = entries
        .iter()
        .flatten()
        .map(HomPoly::vars)
        .next()
        .unwrap_or(0);
    let mut total = HomPoly::zero(vars, n);
    let mut cols: Vec<usize> = Vec::with_capacity(n);
    fn go(
        entries: &[Vec<HomPoly>],
        signed: bool,
        row: usize,
        used: &mut Vec<bool>,
        cols: &mut Vec<usize>,
        acc: HomPoly,
        total: &mut HomPoly,
    ) {
        let n = entries.len();
        if row == n {
            let term = if signed && sign(cols) < 0 {
                acc.scale(&-Rational::one())
            } else {
                acc
            };
            *total = &*total + &term;
            return;
        }
        for c in 0..n {
            if used[c] || entries[row][c].is_zero() {
                continue;
            }
            used[c] = true;
            cols.push(c);
            go(entries, signed, row + 1, used, cols, &acc * &entries[row][c], total);
            cols.pop();
            used[c] = false;
        }
    }
    let mut used = vec![false; n];
    go(entries, signed, 0, &mut used, &mut cols, HomPoly::one(vars), &mut total);
    total
}

fn ambient_forms(a: &RestrictionMatrix, basis: &BasisImage) -> Vec<Vec<HomPoly>> {
    let m = a.m();
    let mut entries = vec![vec![HomPoly::zero(a.i(), 1); m]; m];
    for (p, &(r, c)) in basis.0.iter().enumerate() {
        entries[r][c] = a.row_form(p);
    }
    entries
}

/// `λ ↦ det(Σ_j λ_j Â e_j)`: the determinant composed with `Â` and restricted
/// to `E_i`, expanded as a polynomial in `λ_1..λ_i`.
pub fn det_restrict(a: &RestrictionMatrix) -> HomPoly {
    expand_forms(&ambient_forms(a, &BasisImage::diagonal(a.m())), true)
}

/// The permanent counterpart of [`det_restrict`].
pub fn perm_restrict(a: &RestrictionMatrix, basis: &BasisImage) -> Result<HomPoly> {
    if basis.0.len() != a.m() || !basis.is_diagonal() {
        return Err(Error::UnsupportedBasis);
    }
    Ok(expand_forms(&ambient_forms(a, basis), false))
}

/// Expected coefficient of `λ^d` in the restriction, computed independently
/// as `Perm A^{(d)} / Π d_j!`.
pub fn content_coefficient(a: &RestrictionMatrix, d: &[u32]) -> Result<Rational> {
    let repeated = a.column_repeated(d)?;
    let denom = d
        .iter()
        .fold(BigInt::one(), |acc, &dj| acc * factorial(dj as usize));
    Ok(permanent(&repeated)? / Rational::from_integer(denom))
}

/// All exponent vectors of length `vars` summing to `degree`.
pub fn contents(vars: usize, degree: usize) -> Vec<Vec<u32>> {
    fn go(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == vars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for d in (0..=left).rev() {
            cur.push(d);
            go(vars, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        go(vars, degree as u32, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone)]
pub struct WitnessConfig {
    pub seed: u64,
    /// Number of seeded random candidates after the structured ones.
    pub random_candidates: usize,
    pub gamma: GammaConfig,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            seed: 0,
            random_candidates: 32,
            gamma: GammaConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub m: usize,
    pub i: usize,
    pub a: Matrix,
    pub gamma: Rational,
    pub schedule_index: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub m: usize,
    pub i: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub gamma: RationalJson,
    pub schedule_index: usize,
    pub seed: u64,
}

impl Witness {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            m: self.m,
            i: self.i,
            a: (0..self.a.rows())
                .map(|r| {
                    self.a
                        .row(r)
                        .iter()
                        .map(|v| {
                            let s = format_rational(v);
                            if s.contains('/') {
                                s
                            } else {
                                format!("{s}/1")
                            }
                        })
                        .collect()
                })
                .collect(),
            gamma: RationalJson::from(&self.gamma),
            schedule_index: self.schedule_index,
            seed: self.seed,
        }
    }
}

/// Deterministic candidate schedule: cyclic identity padding (row `p` is
/// `e_{p mod i}`), the all-ones matrix, `a_{p,j} = (p+1)^j`, a cyclic
/// staircase, then seeded random small rationals.
pub fn witness_schedule(m: usize, i: usize, config: &WitnessConfig) -> Vec<Matrix> {
    let int = |v: i64| Rational::from_integer(v.into());
    let build = |f: &dyn Fn(usize, usize) -> Rational| {
        Matrix::from_rows(
            (0..m)
                .map(|p| (0..i).map(|j| f(p, j)).collect())
                .collect(),
        )
        .expect("rectangular")
    };
    let mut out = vec![
        build(&|p, j| int((p % i == j) as i64)),
        build(&|_, _| int(1)),
        build(&|p, j| int((p as i64 + 1).pow(j as u32))),
        build(&|p, j| int((j <= p % i) as i64)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_candidates {
        let rows = (0..m)
            .map(|_| {
                (0..i)
                    .map(|_| {
                        let num: i64 = rng.gen_range(-5..=5);
                        let den: i64 = rng.gen_range(1..=3);
                        Rational::new(num.into(), den.into())
                    })
                    .collect()
            })
            .collect();
        out.push(Matrix::from_rows(rows).expect("rectangular"));
    }
    out
}

/// First candidate `A` in schedule order with `γ_{m,i}(det_restrict(A)) != 0`.
pub fn witness_search(m: usize, i: usize, config: &WitnessConfig) -> Result<Option<Witness>> {
    if !m.is_multiple_of(2) {
        return Err(Error::OddDegree(m));
    }
    if i == 0 || i > m {
        return Err(Error::OutOfRange(format!("i = {i} with m = {m}")));
    }
    let candidates = witness_schedule(m, i, config);
    let found = candidates
        .par_iter()
        .enumerate()
        .map(|(index, a)| -> Result<Option<Witness>> {
            let f = det_restrict(&RestrictionMatrix::new(a.clone())?);
            let value = gamma_eval_with(m, i, &f, &config.gamma)?;
            Ok((!value.is_zero()).then(|| Witness {
                m,
                i,
                a: a.clone(),
                gamma: value,
                schedule_index: index,
                seed: config.seed,
            }))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    found.unwrap_or(Ok(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn permanents() {
        assert_eq!(permanent(&Matrix::identity(4)).unwrap(), qi(1));
        let m = Matrix::from_i64(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(permanent(&m).unwrap(), qi(10));
        let ones = Matrix::from_i64(&[vec![1; 3], vec![1; 3], vec![1; 3]]).unwrap();
        assert_eq!(permanent(&ones).unwrap(), qi(6));
        assert_eq!(permanent_naive(&ones).unwrap(), qi(6));
        assert!(permanent(&Matrix::zeros(2, 3)).is_err());
        let frac = Matrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(2, 1), q(-1, 5)]]).unwrap();
        assert_eq!(permanent(&frac).unwrap(), permanent_naive(&frac).unwrap());
    }

    fn ra(rows: &[Vec<i64>]) -> RestrictionMatrix {
        RestrictionMatrix::new(Matrix::from_i64(rows).unwrap()).unwrap()
    }

    #[test]
    fn restrictions() {
        let f = det_restrict(&ra(&[vec![1, 0], vec![0, 1]]));
        assert_eq!(f, HomPoly::from_terms(2, 2, vec![(vec![1, 1], qi(1))]).unwrap());
        let f = det_restrict(&ra(&[vec![1], vec![1]]));
        assert_eq!(f, HomPoly::power_sum(1, 2));
        let ones = ra(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(det_restrict(&ones).coefficient(&[1, 1]), qi(2));
        for a in [ra(&[vec![1, 0], vec![0, 1]]), ra(&[vec![1], vec![1]]), ones] {
            let p = perm_restrict(&a, &BasisImage::diagonal(a.m())).unwrap();
            assert_eq!(p, det_restrict(&a));
        }
    }

    #[test]
    fn non_diagonal_basis_rejected() {
        let a = ra(&[vec![1, 0], vec![0, 1]]);
        let err = perm_restrict(&a, &BasisImage(vec![(0, 1), (1, 0)])).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBasis));
    }

    #[test]
    fn content_coefficients() {
        assert_eq!(content_coefficient(&ra(&[vec![1, 1], vec![1, 1]]), &[1, 1]).unwrap(), qi(2));
        assert_eq!(content_coefficient(&ra(&[vec![1, 0], vec![0, 1]]), &[2, 0]).unwrap(), qi(0));
        assert_eq!(content_coefficient(&ra(&[vec![1, 0], vec![0, 1]]), &[1, 1]).unwrap(), qi(1));
        assert!(content_coefficient(&ra(&[vec![1, 0], vec![0, 1]]), &[1, 0]).is_err());
    }

    #[test]
    fn contents_enumerated() {
        assert_eq!(contents(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(contents(3, 4).len(), 15);
    }

    #[test]
    fn witnesses_small() {
        let cfg = WitnessConfig::default();
        let w = witness_search(2, 1, &cfg).unwrap().unwrap();
        assert_eq!(w.schedule_index, 0);
        assert_eq!(w.gamma, qi(1));
        let w = witness_search(2, 2, &cfg).unwrap().unwrap();
        assert_eq!(w.schedule_index, 0);
        assert_eq!(w.gamma, q(-1, 4));
        assert!(witness_search(3, 1, &cfg).is_err());
    }

    #[test]
    fn witness_json_shape() {
        let w = witness_search(2, 2, &WitnessConfig::default()).unwrap().unwrap();
        let text = serde_json::to_string(&w.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"m":2,"i":2,"A":[["1/1","0/1"],["0/1","1/1"]],"gamma":{"num":"-1","den":"4"},"schedule_index":0,"seed":0}"#
        );
    }
}
