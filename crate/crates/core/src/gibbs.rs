//! Gibbs measures `μ_x(α) = c_α x^α / f(x)` of polynomials with
//! nonnegative coefficients.

use num_traits::{One, Signed, Zero};

use crate::certificate::{Certificate, InclusionProbabilities, Witness};
use crate::cones::{ContainsMode, GeneratedCone};
use crate::error::{check_dim, Error, Result};
use crate::linalg::SymMatrix;
use crate::lorentz::delta_ij;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::sampling;

/// Largest support accepted.
pub const MAX_SUPPORT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GibbsModel {
    f: Polynomial,
    support: Vec<(Vec<u32>, Rational)>,
}

impl GibbsModel {
    pub fn new(f: Polynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.num_terms() > MAX_SUPPORT {
            return Err(Error::InvalidInput(format!("support has {} terms, limit is {MAX_SUPPORT}", f.num_terms())));
        }
        let mut support = Vec::with_capacity(f.num_terms());
        for (k, (exp, c)) in f.terms().enumerate() {
            if c.is_negative() {
                return Err(Error::InvalidInput(format!("terms[{k}].coef is negative")));
            }
            support.push((exp.to_vec(), c.clone()));
        }
        Ok(GibbsModel { f, support })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn support(&self) -> &[(Vec<u32>, Rational)] {
        &self.support
    }

    fn check_point(&self, x: &[Rational]) -> Result<()> {
        check_dim(self.f.nvars(), x.len())?;
        if x.iter().all(Signed::is_positive) {
            Ok(())
        } else {
            Err(Error::Precondition("x must be strictly positive".into()))
        }
    }

    /// Unnormalized weights `c_α x^α` in support order.
    fn weights(&self, x: &[Rational]) -> Vec<Rational> {
        self.support
            .iter()
            .map(|(exp, c)| {
                exp.iter().zip(x).fold(c.clone(), |acc, (&e, xi)| acc * num_traits::pow(xi.clone(), e as usize))
            })
            .collect()
    }

    /// `f(x)` as the sum of the weights.
    pub fn partition(&self, x: &[Rational]) -> Result<Rational> {
        self.check_point(x)?;
        Ok(self.weights(x).into_iter().fold(Rational::zero(), |s, w| s + w))
    }

    pub fn prob(&self, x: &[Rational], alpha: &[u32]) -> Result<Rational> {
        self.check_point(x)?;
        check_dim(self.f.nvars(), alpha.len())?;
        let z = self.partition(x)?;
        let Some(pos) = self.support.iter().position(|(e, _)| e.as_slice() == alpha) else {
            return Ok(Rational::zero());
        };
        Ok(&self.weights(x)[pos] / z)
    }

    /// All probabilities, in support order.
    pub fn probabilities(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check_point(x)?;
        let w = self.weights(x);
        let z = w.iter().fold(Rational::zero(), |s, v| s + v);
        Ok(w.into_iter().map(|v| v / &z).collect())
    }

    /// `E[α]` by enumeration over the support.
    pub fn mean(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        let p = self.probabilities(x)?;
        let n = self.f.nvars();
        let mut m = vec![Rational::zero(); n];
        for ((exp, _), pk) in self.support.iter().zip(&p) {
            for i in 0..n {
                if exp[i] != 0 {
                    m[i] += pk * Rational::from_integer(exp[i].into());
                }
            }
        }
        Ok(m)
    }

    /// `x_i ∂_i f(x) / f(x)`.
    pub fn mean_from_gradient(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check_point(x)?;
        let fx = self.f.eval(x)?;
        let g = self.f.gradient(x)?;
        Ok(g.iter().zip(x).map(|(gi, xi)| gi * xi / &fx).collect())
    }

    /// `Cov(α_i, α_j)` by enumeration over the support.
    pub fn covariance(&self, x: &[Rational]) -> Result<SymMatrix> {
        let p = self.probabilities(x)?;
        let mean = self.mean(x)?;
        let n = self.f.nvars();
        let mut cov = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = Rational::zero();
                for ((exp, _), pk) in self.support.iter().zip(&p) {
                    let di = Rational::from_integer(exp[i].into()) - &mean[i];
                    let dj = Rational::from_integer(exp[j].into()) - &mean[j];
                    s += pk * di * dj;
                }
                cov.set(i, j, s);
            }
        }
        Ok(cov)
    }

    /// Central-difference Hessian of `θ ↦ log f(e^θ)` at `θ = log x`.
    /// Differences of the log partition function are evaluated as
    /// `log1p(Σ_α μ_x(α) expm1(αᵀδ))`, which keeps them accurate at small steps.
    pub fn theta_hessian_fd(&self, x: &[Rational], step: f64) -> Result<Vec<Vec<f64>>> {
        let p: Vec<f64> = self.probabilities(x)?.iter().map(rational::to_f64).collect();
        let n = self.f.nvars();
        let shift = |delta: &[f64]| -> f64 {
            let s: f64 = self
                .support
                .iter()
                .zip(&p)
                .map(|((exp, _), pk)| {
                    let t: f64 = exp.iter().zip(delta).map(|(&e, d)| e as f64 * d).sum();
                    pk * t.exp_m1()
                })
                .sum();
            s.ln_1p()
        };
        let unit = |i: usize, s: f64| -> Vec<f64> {
            let mut d = vec![0.0; n];
            d[i] = s;
            d
        };
        let h = step;
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            out[i][i] = (shift(&unit(i, h)) + shift(&unit(i, -h))) / (h * h);
            for j in i + 1..n {
                let mut pp = unit(i, h);
                pp[j] = h;
                let mut pm = unit(i, h);
                pm[j] = -h;
                let mut mp = unit(i, -h);
                mp[j] = h;
                let mut mm = unit(i, -h);
                mm[j] = -h;
                let v = (shift(&pp) - shift(&pm) - shift(&mp) + shift(&mm)) / (4.0 * h * h);
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        Ok(out)
    }

    pub fn is_multi_affine(&self) -> bool {
        self.support.iter().all(|(e, _)| e.iter().all(|&k| k <= 1))
    }
}

/// Samples `w ∈ int K` and checks `Δ_ij f(w) ≥ 0` over index pairs
/// `i < j` with `e_i, e_j ∈ K`.
pub fn rayleigh_measure_check(model: &GibbsModel, k: &GeneratedCone, samples: u64, seed: u64) -> Result<Certificate> {
    let f = model.polynomial();
    let n = f.nvars();
    check_dim(n, k.nvars())?;
    let unit = |i: usize| -> Vec<Rational> {
        (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
    };
    let mut admissible = Vec::with_capacity(n);
    for i in 0..n {
        admissible.push(k.contains(&unit(i), ContainsMode::Exact)?);
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if admissible[i] && admissible[j] {
                pairs.push((i, j, delta_ij(f, i, j)?));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::Precondition("no index pair i < j with e_i, e_j in K".into()));
    }
    if k.rank() < n {
        return Err(Error::NotFullDimensional);
    }
    let mut rng = sampling::rng(seed);
    for s in 1..=samples {
        let w = k.interior_sample_with(&mut rng);
        for (i, j, delta) in &pairs {
            let value = delta.eval(&w)?;
            if value.is_negative() {
                let inclusion = if model.is_multi_affine() { Some(inclusion(f, &w, *i, *j)?) } else { None };
                let witness = Witness::Rayleigh { w, i: *i, j: *j, value, inclusion };
                return Ok(Certificate::no(witness, seed, s));
            }
        }
    }
    Ok(Certificate::unknown(seed, samples))
}

/// For multi-affine `f`: `P(i, j ∈ S) = w_i w_j ∂_ij f / f` and
/// `P(i ∈ S) = w_i ∂_i f / f`.
fn inclusion(f: &Polynomial, w: &[Rational], i: usize, j: usize) -> Result<InclusionProbabilities> {
    let fw = f.eval(w)?;
    let fi = f.partial(i);
    let fj = f.partial(j);
    let fij = fi.partial(j);
    Ok(InclusionProbabilities {
        joint: &w[i] * &w[j] * fij.eval(w)? / &fw,
        marginal_i: &w[i] * fi.eval(w)? / &fw,
        marginal_j: &w[j] * fj.eval(w)? / &fw,
    })
}
