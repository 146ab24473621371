//! Characters and symmetric-square multiplicities from explicit Specht
//! module matrices built on polytabloids, compared with the
//! Murnaghan–Nakayama tables.

use std::collections::HashMap;

use latin_gct::kronecker::{partitions, CharacterTable, Partition};
use latin_gct::perm::{all_permutations, compose, cycle_type, sign};
use latin_gct::rational::factorial;
use latin_gct::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A tabloid records the row of each number.
type Tabloid = Vec<usize>;

struct Specht {
    /// Standard tableaux as rows of 0-based entries.
    standard: Vec<Vec<Vec<usize>>>,
    /// Polytabloid of each standard tableau in tabloid coordinates.
    basis: Vec<HashMap<Tabloid, i64>>,
    /// The tabloids `{T}` of the standard tableaux, used as coordinates.
    pivots: Vec<Tabloid>,
}

fn standard_tableaux(shape: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    fn go(shape: &[usize], k: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == n {
            out.push(cur.clone());
            return;
        }
        for r in 0..shape.len() {
            let len = cur[r].len();
            if len < shape[r] && (r == 0 || cur[r - 1].len() > len) {
                cur[r].push(k);
                go(shape, k + 1, n, cur, out);
                cur[r].pop();
            }
        }
    }
    go(shape, 0, n, &mut vec![Vec::new(); shape.len()], &mut out);
    out
}

fn tabloid_of(t: &[Vec<usize>], n: usize) -> Tabloid {
    let mut rows = vec![0; n];
    for (r, row) in t.iter().enumerate() {
        for &k in row {
            rows[k] = r;
        }
    }
    rows
}

/// `Σ_{q ∈ C(T)} sign(q) {qT}`.
fn polytabloid(t: &[Vec<usize>], n: usize) -> HashMap<Tabloid, i64> {
    let width = t[0].len();
    let columns: Vec<Vec<usize>> = (0..width)
        .map(|c| t.iter().filter(|r| r.len() > c).map(|r| r[c]).collect())
        .collect();
    let mut out: HashMap<Tabloid, i64> = HashMap::new();
    let perms: Vec<Vec<Vec<usize>>> = columns.iter().map(|c| all_permutations(c.len())).collect();
    let mut choice = vec![0usize; width];
    loop {
        let mut image = t.to_vec();
        let mut s = 1i64;
        for c in 0..width {
            let p = &perms[c][choice[c]];
            s *= sign(p) as i64;
            for (r, &target) in p.iter().enumerate() {
                image[target][c] = columns[c][r];
            }
        }
        *out.entry(tabloid_of(&image, n)).or_default() += s;
        let mut c = 0;
        loop {
            if c == width {
                out.retain(|_, v| *v != 0);
                return out;
            }
            choice[c] += 1;
            if choice[c] < perms[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

impl Specht {
    fn new(shape: &[usize]) -> Self {
        let n = shape.iter().sum();
        let standard = standard_tableaux(shape);
        let basis = standard.iter().map(|t| polytabloid(t, n)).collect();
        let pivots = standard.iter().map(|t| tabloid_of(t, n)).collect();
        Specht {
            standard,
            basis,
            pivots,
        }
    }

    fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Matrix of `π` (acting on entries) in the standard polytabloid basis.
    fn matrix(&self, pi: &[usize]) -> Vec<Vec<Rational>> {
        let n = pi.len();
        let d = self.dim();
        // coordinates of basis vectors at the pivot tabloids
        let a: Vec<Vec<Rational>> = self
            .pivots
            .iter()
            .map(|p| {
                self.basis
                    .iter()
                    .map(|b| Rational::from_integer(BigInt::from(*b.get(p).unwrap_or(&0))))
                    .collect()
            })
            .collect();
        let mut out = vec![vec![Rational::zero(); d]; d];
        for (col, t) in self.standard.iter().enumerate() {
            let moved: Vec<Vec<usize>> = t.iter().map(|r| r.iter().map(|&k| pi[k]).collect()).collect();
            let image = polytabloid(&moved, n);
            let rhs: Vec<Rational> = self
                .pivots
                .iter()
                .map(|p| Rational::from_integer(BigInt::from(*image.get(p).unwrap_or(&0))))
                .collect();
            let x = solve(a.clone(), rhs);
            for row in 0..d {
                out[row][col] = x[row].clone();
            }
        }
        out
    }
}

fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= p * &f;
                }
                let v = &b[col] * &f;
                b[r] -= v;
            }
        }
    }
    (0..n).map(|r| &b[r] / &a[r][r]).collect()
}

fn trace(m: &[Vec<Rational>]) -> Rational {
    (0..m.len()).map(|k| m[k][k].clone()).sum()
}

/// Trace on the symmetric square, from the action on `e_a e_b` with `a ≤ b`.
fn symmetric_square_trace(r: &[Vec<Rational>]) -> Rational {
    let d = r.len();
    let mut t = Rational::zero();
    for a in 0..d {
        for b in a..d {
            t += if a == b {
                &r[a][a] * &r[a][a]
            } else {
                &r[a][a] * &r[b][b] + &r[b][a] * &r[a][b]
            };
        }
    }
    t
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

#[test]
fn specht_representations_are_homomorphisms() {
    let s = Specht::new(&[3, 2]);
    assert_eq!(s.dim(), 5);
    let perms = all_permutations(5);
    for (a, b) in [(7usize, 33usize), (100, 5), (61, 119)] {
        let ab = compose(&perms[a], &perms[b]);
        let (ma, mb, mab) = (s.matrix(&perms[a]), s.matrix(&perms[b]), s.matrix(&ab));
        for r in 0..5 {
            for c in 0..5 {
                let v: Rational = (0..5).map(|k| &ma[r][k] * &mb[k][c]).sum();
                assert_eq!(v, mab[r][c]);
            }
        }
    }
}

#[test]
fn characters_match_specht_traces() {
    for n in 1..=5 {
        let table = CharacterTable::new(n);
        for lambda in partitions(n) {
            let s = Specht::new(lambda.parts());
            for pi in all_permutations(n) {
                let class = Partition::from_unsorted(cycle_type(&pi));
                let chi = table.character(&lambda, &class).unwrap();
                assert_eq!(trace(&s.matrix(&pi)), Rational::from_integer(chi.into()), "{lambda} at {pi:?}");
            }
        }
    }
}

#[test]
fn symmetric_squares_match_direct_decomposition() {
    for n in 2..=5 {
        let table = CharacterTable::new(n);
        let perms = all_permutations(n);
        let order = Rational::from_integer(factorial(n));
        let modules: Vec<(Partition, Vec<Vec<Vec<Rational>>>)> = partitions(n)
            .into_iter()
            .map(|l| {
                let s = Specht::new(l.parts());
                let mats = perms.iter().map(|pi| s.matrix(pi)).collect();
                (l, mats)
            })
            .collect();
        for (mu, mu_mats) in &modules {
            let sq: Vec<Rational> = mu_mats.iter().map(|r| symmetric_square_trace(r)).collect();
            for (lambda, l_mats) in &modules {
                let direct: Rational = l_mats
                    .iter()
                    .zip(&sq)
                    .map(|(r, s)| trace(r) * s)
                    .sum::<Rational>()
                    / &order;
                let sk = table.symmetric_kronecker(lambda, mu).unwrap();
                assert_eq!(direct, Rational::from_integer(sk), "sk({lambda}, {mu})");
                for (nu, n_mats) in &modules {
                    let g: Rational = (0..perms.len())
                        .map(|k| trace(&l_mats[k]) * trace(&mu_mats[k]) * trace(&n_mats[k]))
                        .sum::<Rational>()
                        / &order;
                    assert_eq!(g, Rational::from_integer(table.kronecker(lambda, mu, nu).unwrap()));
                }
            }
        }
    }
}

#[test]
fn sign_square_is_trivial() {
    let table = CharacterTable::new(2);
    assert_eq!(table.symmetric_kronecker(&p(&[2]), &p(&[1, 1])).unwrap(), BigInt::one());
}
