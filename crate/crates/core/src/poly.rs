//! Sparse homogeneous polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{factorial, pow, Rational, RationalJson};

/// Homogeneous polynomial of fixed degree in `vars` variables, stored as a
/// map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoly {
    vars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl HomPoly {
    pub fn zero(vars: usize, degree: usize) -> Self {
        HomPoly {
            vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        let mut p = HomPoly::zero(vars, 0);
        p.terms.insert(vec![0; vars], Rational::one());
        p
    }

    pub fn from_terms<I>(vars: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = HomPoly::zero(vars, degree);
        for (exp, coeff) in terms {
            if exp.len() != vars {
                return Err(Error::Dimension(format!(
                    "exponent vector {exp:?} has length {}, expected {vars}",
                    exp.len()
                )));
            }
            let total: u32 = exp.iter().sum();
            if total as usize != degree {
                return Err(Error::Dimension(format!(
                    "exponent vector {exp:?} has degree {total}, expected {degree}"
                )));
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }

    /// `Σ_k coeffs[k] λ_k`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let vars = coeffs.len();
        let mut p = HomPoly::zero(vars, 1);
        for (k, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; vars];
            exp[k] = 1;
            p.add_term(exp, c.clone());
        }
        p
    }

    /// `λ_1^degree + … + λ_vars^degree`.
    pub fn power_sum(vars: usize, degree: usize) -> Self {
        let mut p = HomPoly::zero(vars, degree);
        for k in 0..vars {
            let mut exp = vec![0; vars];
            exp[k] = degree as u32;
            p.add_term(exp, Rational::one());
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, exp: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> HomPoly {
        let mut out = HomPoly::zero(self.vars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * factor);
        }
        out
    }

    pub fn pow(&self, exp: usize) -> HomPoly {
        (0..exp).fold(HomPoly::one(self.vars), |acc, _| &acc * self)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.vars
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&d, x)| acc * pow(x, d as usize))
            })
            .sum())
    }

    /// `λ ↦ f(g λ)` for a square matrix `g` acting on the variables.
    pub fn compose_linear(&self, g: &Matrix) -> Result<HomPoly> {
        if g.rows() != self.vars || g.cols() != self.vars {
            return Err(Error::Dimension(format!(
                "substitution matrix is {}x{}, expected {}x{}",
                g.rows(),
                g.cols(),
                self.vars,
                self.vars
            )));
        }
        let forms: Vec<HomPoly> = (0..self.vars)
            .map(|j| HomPoly::linear_form(g.row(j)))
            .collect();
        let mut powers: Vec<Vec<HomPoly>> = forms
            .iter()
            .map(|f| vec![HomPoly::one(self.vars), f.clone()])
            .collect();
        let mut out = HomPoly::zero(self.vars, self.degree);
        for (exp, coeff) in &self.terms {
            let mut term = HomPoly::one(self.vars).scale(coeff);
            for (j, &d) in exp.iter().enumerate() {
                while powers[j].len() <= d as usize {
                    let next = powers[j].last().expect("nonempty") * &forms[j];
                    powers[j].push(next);
                }
                term = &term * &powers[j][d as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Sets every variable with index `>= vars` to zero.
    pub fn restrict(&self, vars: usize) -> HomPoly {
        let mut out = HomPoly::zero(vars.min(self.vars), self.degree);
        for (e, c) in &self.terms {
            if e[vars.min(self.vars)..].iter().all(|&d| d == 0) {
                out.add_term(e[..vars.min(self.vars)].to_vec(), c.clone());
            }
        }
        out
    }

    /// Multinomial `degree! / Π d_j!` for an exponent vector.
    pub fn multinomial(exp: &[u32]) -> Rational {
        let total: u32 = exp.iter().sum();
        let denom = exp
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &d| acc * factorial(d as usize));
        Rational::new(factorial(total as usize), denom)
    }

    pub fn to_json(&self) -> HomPolyJson {
        HomPolyJson {
            vars: self.vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let r = RationalJson::from(c);
                    TermJson {
                        exp: e.clone(),
                        num: r.num,
                        den: r.den,
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &HomPolyJson) -> Result<Self> {
        let terms = json
            .terms
            .iter()
            .map(|t| {
                let c = RationalJson {
                    num: t.num.clone(),
                    den: t.den.clone(),
                }
                .to_rational()?;
                Ok((t.exp.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        HomPoly::from_terms(json.vars, json.degree, terms)
    }
}

impl Add for &HomPoly {
    type Output = HomPoly;
    fn add(self, rhs: &HomPoly) -> HomPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &HomPoly {
    type Output = HomPoly;
    fn mul(self, rhs: &HomPoly) -> HomPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = HomPoly::zero(self.vars, self.degree + rhs.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Literal format `{"vars", "degree", "terms": [{"exp", "num", "den"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomPolyJson {
    pub vars: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn product_of_linear_forms() {
        let a = HomPoly::linear_form(&[qi(1), qi(1)]);
        let sq = &a * &a;
        assert_eq!(sq.coefficient(&[2, 0]), qi(1));
        assert_eq!(sq.coefficient(&[1, 1]), qi(2));
        assert_eq!(sq.degree(), 2);
        assert_eq!(a.pow(3).coefficient(&[1, 2]), qi(3));
    }

    #[test]
    fn rejects_inhomogeneous_terms() {
        assert!(HomPoly::from_terms(2, 2, vec![(vec![1, 0], qi(1))]).is_err());
        assert!(HomPoly::from_terms(2, 2, vec![(vec![2], qi(1))]).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = HomPoly::from_terms(1, 1, vec![(vec![1], qi(2)), (vec![1], qi(-2))]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn composition_matches_evaluation() {
        let f = HomPoly::from_terms(
            2,
            3,
            vec![(vec![3, 0], q(1, 2)), (vec![1, 2], qi(-3)), (vec![0, 3], qi(5))],
        )
        .unwrap();
        let g = Matrix::from_i64(&[vec![2, 1], vec![-1, 3]]).unwrap();
        let fg = f.compose_linear(&g).unwrap();
        let x = vec![q(1, 3), qi(-2)];
        let gx: Vec<Rational> = (0..2)
            .map(|r| g.row(r).iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        assert_eq!(fg.evaluate(&x).unwrap(), f.evaluate(&gx).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = HomPoly::from_terms(2, 2, vec![(vec![1, 1], q(-1, 2))]).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"vars":2,"degree":2,"terms":[{"exp":[1,1],"num":"-1","den":"2"}]}"#
        );
        let back: HomPolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(HomPoly::from_json(&back).unwrap(), f);
    }

    #[test]
    fn restriction_drops_variables() {
        let f = HomPoly::from_terms(3, 2, vec![(vec![1, 1, 0], qi(1)), (vec![0, 1, 1], qi(1))]).unwrap();
        let r = f.restrict(2);
        assert_eq!(r.vars(), 2);
        assert_eq!(r.len(), 1);
        assert_eq!(r.coefficient(&[1, 1]), qi(1));
    }
}
