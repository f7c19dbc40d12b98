//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::SymMatrix;
use crate::rational::{self, Rational};

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then lexicographic with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponent(exps)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exp, Rational::one());
        p
    }

    /// The linear form `sum_i a_i x_i`.
    pub fn linear(coefs: &[Rational]) -> Self {
        let n = coefs.len();
        let mut p = Self::zero(n);
        for (i, c) in coefs.iter().enumerate() {
            let mut exp = vec![0; n];
            exp[i] = 1;
            p.add_term(exp, c.clone());
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exp, c) in terms {
            check_dim(nvars, exp.len())?;
            p.add_term(exp, c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), rational::int(*c))))
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rational) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let key = Exponent(exp);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Exponent::total_degree).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d`. The zero polynomial
    /// reports degree 0.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Exponent::total_degree);
        match degrees.next() {
            None => Some(0),
            Some(d) => degrees.all(|e| e == d).then_some(d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<Rational> {
        self.is_constant()
            .then(|| self.coefficient(&vec![0; self.nvars]))
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms
            .get(&Exponent(exp.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `∂f/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            let e = exp.0[i];
            if e == 0 {
                continue;
            }
            let mut next = exp.0.clone();
            next[i] -= 1;
            out.add_term(next, c * rational::int(e as i64));
        }
        out
    }

    /// Directional derivative `D_a f = sum_i a_i ∂f/∂x_i`.
    pub fn dir_derivative(&self, a: &[Rational]) -> Result<Self> {
        check_dim(self.nvars, a.len())?;
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            for (i, ai) in a.iter().enumerate() {
                let e = exp.0[i];
                if e == 0 || ai.is_zero() {
                    continue;
                }
                let mut next = exp.0.clone();
                next[i] -= 1;
                out.add_term(next, c * ai * rational::int(e as i64));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.nvars, x.len())?;
        let mut acc = Rational::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(&exp.0) {
                if e > 0 {
                    term *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.nvars, x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(exp, c)| {
                exp.0
                    .iter()
                    .zip(x)
                    .fold(rational::to_f64(c), |acc, (&e, xi)| acc * xi.powi(e as i32))
            })
            .sum())
    }

    pub fn gradient(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.nvars, x.len())?;
        (0..self.nvars).map(|i| self.partial(i).eval(x)).collect()
    }

    pub fn hessian(&self, x: &[Rational]) -> Result<SymMatrix> {
        check_dim(self.nvars, x.len())?;
        let n = self.nvars;
        let partials: Vec<Polynomial> = (0..n).map(|i| self.partial(i)).collect();
        let mut h = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                h.set(i, j, partials[i].partial(j).eval(x)?);
            }
        }
        Ok(h)
    }

    /// Coefficients `(c_0, ..., c_d)` of `t ↦ f(x + t v)`, lowest degree
    /// first, computed by direct expansion of every monomial.
    pub fn restriction_taylor(&self, x: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.nvars, x.len())?;
        check_dim(self.nvars, v.len())?;
        let d = self.degree();
        let mut out = vec![Rational::zero(); d + 1];
        for (exp, c) in &self.terms {
            let mut prod = vec![c.clone()];
            for (i, &e) in exp.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = binomial_power(&x[i], &v[i], e as usize);
                prod = mul_univariate(&prod, &factor);
            }
            for (k, ck) in prod.into_iter().enumerate() {
                out[k] += ck;
            }
        }
        Ok(out)
    }

    /// `[f, D_v f, ..., D_v^d f]` for homogeneous `f` of degree `d`.
    pub fn derivative_tower(&self, v: &[Rational]) -> Result<Vec<Polynomial>> {
        check_dim(self.nvars, v.len())?;
        let d = self.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        let mut tower = Vec::with_capacity(d + 1);
        tower.push(self.clone());
        for k in 0..d {
            let next = tower[k].dir_derivative(v)?;
            tower.push(next);
        }
        Ok(tower)
    }

    /// Symmetric matrix `Q` with `f(x) = xᵀ Q x` for a quadratic form.
    pub fn quadratic_form_matrix(&self) -> Result<SymMatrix> {
        match self.homogeneous_degree() {
            Some(2) | Some(0) if self.degree() <= 2 => {}
            _ => return Err(Error::Precondition("expected a quadratic form".into())),
        }
        let zero = vec![Rational::zero(); self.nvars];
        Ok(self.hessian(&zero)?.scale(&rational::frac(1, 2)))
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        crate::error::parse_json("polynomial JSON", s)
    }
}

fn binomial_power(a: &Rational, b: &Rational, e: usize) -> Vec<Rational> {
    (0..=e)
        .map(|k| {
            rational::binomial(e, k)
                * num_traits::pow(a.clone(), e - k)
                * num_traits::pow(b.clone(), k)
        })
        .collect()
}

fn mul_univariate(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials in different rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.0.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different rings");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (exp, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            if k > 0 {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            } else if negative {
                write!(f, "-")?;
            }
            let abs = c.abs();
            let is_const = exp.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
            }
            for (i, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    #[serde(with = "rational::serde_rational")]
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;

    fn try_from(j: PolynomialJson) -> Result<Self> {
        if j.nvars == 0 {
            return Err(Error::InvalidInput("nvars must be positive".into()));
        }
        for (k, t) in j.terms.iter().enumerate() {
            if t.exp.len() != j.nvars {
                return Err(Error::InvalidInput(format!(
                    "terms[{k}].exp has length {}, expected {}",
                    t.exp.len(),
                    j.nvars
                )));
            }
        }
        Polynomial::from_terms(j.nvars, j.terms.into_iter().map(|t| (t.exp, t.coef)))
    }
}

impl From<Polynomial> for PolynomialJson {
    fn from(p: Polynomial) -> Self {
        PolynomialJson {
            nvars: p.nvars,
            terms: p
                .terms()
                .map(|(e, c)| TermJson { exp: e.to_vec(), coef: c.clone() })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vec_of};

    /// 4x1^3 + 15x1^2x2 + 18x1x2^2 + 6x2^3
    pub(crate) fn cubic() -> Polynomial {
        Polynomial::from_int_terms(2, &[(&[3, 0], 4), (&[2, 1], 15), (&[1, 2], 18), (&[0, 3], 6)]).unwrap()
    }

    fn xy() -> Polynomial {
        Polynomial::from_int_terms(2, &[(&[1, 1], 1)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)]).unwrap();
        assert_eq!(f.eval(&vec_of(&[3, 4])).unwrap(), int(25));
        assert_eq!(cubic().eval(&vec_of(&[2, 1])).unwrap(), int(134));
        assert_eq!(Polynomial::zero(3).eval(&vec_of(&[1, 2, 3])).unwrap(), int(0));
        assert!(matches!(
            f.eval(&vec_of(&[1])),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn directional_derivative_examples() {
        let d = xy().dir_derivative(&vec_of(&[1, 1])).unwrap();
        assert_eq!(d, Polynomial::linear(&vec_of(&[1, 1])));

        let d = cubic().dir_derivative(&vec_of(&[1, 1])).unwrap();
        let expected =
            Polynomial::from_int_terms(2, &[(&[2, 0], 27), (&[1, 1], 66), (&[0, 2], 36)]).unwrap();
        assert_eq!(d, expected);

        let c = Polynomial::constant(2, int(7));
        assert!(c.dir_derivative(&vec_of(&[3, -1])).unwrap().is_zero());
        assert!(c.dir_derivative(&vec_of(&[1])).is_err());
    }

    #[test]
    fn gradient_and_hessian_examples() {
        let h = xy().hessian(&vec_of(&[5, -3])).unwrap();
        assert_eq!(h, SymMatrix::from_rows(&[vec_of(&[0, 1]), vec_of(&[1, 0])]).unwrap());

        let f = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)]).unwrap();
        assert_eq!(f.gradient(&vec_of(&[1, 2])).unwrap(), vec_of(&[2, 4]));

        assert_eq!(cubic().gradient(&vec_of(&[2, 1])).unwrap(), vec_of(&[126, 150]));
    }

    #[test]
    fn restriction_taylor_examples() {
        let c = cubic().restriction_taylor(&vec_of(&[2, 1]), &vec_of(&[1, 1])).unwrap();
        assert_eq!(c, vec_of(&[134, 276, 189, 43]));

        let f = Polynomial::from_int_terms(2, &[(&[2, 0], 1)]).unwrap();
        let c = f.restriction_taylor(&vec_of(&[0, 0]), &vec_of(&[1, 0])).unwrap();
        assert_eq!(c, vec_of(&[0, 0, 1]));

        // x = v gives f(v)(1+t)^d
        let v = vec_of(&[3, 2]);
        let fv = cubic().eval(&v).unwrap();
        let c = cubic().restriction_taylor(&v, &v).unwrap();
        let expected: Vec<Rational> = (0..=3).map(|k| &fv * rational::binomial(3, k)).collect();
        assert_eq!(c, expected);
    }

    #[test]
    fn derivative_tower_examples() {
        let q = Polynomial::from_int_terms(
            3,
            &[
                (&[2, 0, 0], 1),
                (&[1, 1, 0], 8),
                (&[0, 2, 0], -1),
                (&[1, 0, 1], -1),
                (&[0, 1, 1], 11),
                (&[0, 0, 2], 2),
            ],
        )
        .unwrap();
        let tower = q.derivative_tower(&vec_of(&[1, 1, 1])).unwrap();
        assert_eq!(tower.len(), 3);
        assert_eq!(tower[1], Polynomial::linear(&vec_of(&[9, 17, 14])));
        assert_eq!(tower[2], Polynomial::constant(3, int(40)));

        let tower = xy().derivative_tower(&vec_of(&[1, 1])).unwrap();
        assert_eq!(tower[1], Polynomial::linear(&vec_of(&[1, 1])));
        assert_eq!(tower[2], Polynomial::constant(2, int(2)));

        let d = 5;
        let f = Polynomial::from_int_terms(2, &[(&[d, 0], 1)]).unwrap();
        let tower = f.derivative_tower(&vec_of(&[1, 0])).unwrap();
        for (k, g) in tower.iter().enumerate() {
            let coef = rational::factorial(d as usize) / rational::factorial(d as usize - k);
            assert_eq!(g, &Polynomial::from_terms(2, [(vec![d - k as u32, 0], coef)]).unwrap());
        }
        assert_eq!(tower[d as usize].constant_value(), Some(int(120)));

        let not_homog = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], 1)]).unwrap();
        assert_eq!(not_homog.derivative_tower(&vec_of(&[1, 1])), Err(Error::NotHomogeneous));
    }

    #[test]
    fn homogeneity_examples() {
        let f = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)]).unwrap();
        assert_eq!(f.homogeneous_degree(), Some(2));
        let g = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], 1)]).unwrap();
        assert_eq!(g.homogeneous_degree(), None);
        assert_eq!(Polynomial::zero(2).homogeneous_degree(), Some(0));
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = xy();
        assert!((&f - &f).is_zero());
        let g = Polynomial::from_terms(2, [(vec![1, 1], frac(1, 2)), (vec![1, 1], frac(-1, 2))]).unwrap();
        assert_eq!(g.num_terms(), 0);
    }

    #[test]
    fn json_is_graded_lex_and_round_trips() {
        let s = cubic().to_json_string();
        assert_eq!(
            s,
            r#"{"nvars":2,"terms":[{"exp":[3,0],"coef":"4/1"},{"exp":[2,1],"coef":"15/1"},{"exp":[1,2],"coef":"18/1"},{"exp":[0,3],"coef":"6/1"}]}"#
        );
        assert_eq!(Polynomial::from_json_str(&s).unwrap(), cubic());

        let err = Polynomial::from_json_str(r#"{"nvars":2,"terms":[{"exp":[1],"coef":"1"}]}"#).unwrap_err();
        assert!(err.to_string().contains("terms[0].exp"), "{err}");
    }

    #[test]
    fn quadratic_form_matrix_halves_the_hessian() {
        let q = xy().quadratic_form_matrix().unwrap();
        assert_eq!(q.get(0, 1), &frac(1, 2));
        assert!(cubic().quadratic_form_matrix().is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(cubic().to_string(), "4x1^3 + 15x1^2x2 + 18x1x2^2 + 6x2^3");
        let g = Polynomial::from_int_terms(2, &[(&[0, 2], -1), (&[0, 0], 3)]).unwrap();
        assert_eq!(g.to_string(), "-x2^2 + 3");
    }
}
