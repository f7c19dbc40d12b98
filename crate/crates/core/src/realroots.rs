//! Exact univariate real-root analysis over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(rational::vec_of(coeffs))
    }

    /// `prod (t - r_i)`.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(UniPoly::new(vec![Rational::one()]), |acc, r| {
            acc.mul(&UniPoly::new(vec![-r.clone(), Rational::one()]))
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// `p(t + a)`.
    pub fn shift(&self, a: &Rational) -> UniPoly {
        let linear = UniPoly::new(vec![a.clone(), Rational::one()]);
        self.coeffs.iter().rev().fold(UniPoly::new(vec![]), |acc, c| {
            let mut next = acc.mul(&linear).coeffs;
            if next.is_empty() {
                next.push(Rational::zero());
            }
            next[0] += c;
            UniPoly::new(next)
        })
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let lead = divisor.leading().ok_or(Error::ZeroPolynomial)?.clone();
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if rem.len() < divisor.coeffs.len() {
            return Ok((UniPoly::new(vec![]), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        UniPoly::new(ints.into_iter().map(|c| Rational::new(c, gcd.clone())).collect())
    }

    fn sign_at(&self, t: &Rational) -> i32 {
        rational::sign(&self.eval(t))
    }
}

fn gcd(a: &UniPoly, b: &UniPoly) -> Result<UniPoly> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r.primitive();
    }
    Ok(a.primitive())
}

/// `p / gcd(p, p')`, scaled to a primitive integer polynomial with positive
/// leading coefficient.
pub fn square_free(p: &UniPoly) -> Result<UniPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Ok(UniPoly::new(vec![Rational::one()]));
    }
    let g = gcd(p, &p.derivative())?;
    let (q, _) = p.div_rem(&g)?;
    let q = q.primitive();
    Ok(if q.leading().is_some_and(Signed::is_negative) { q.scale(&-Rational::one()) } else { q })
}

/// Sturm chain with positive content normalization at each step.
pub fn sturm_chain(p: &UniPoly) -> Result<Vec<UniPoly>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut chain = vec![p.primitive(), p.derivative().primitive()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1])?;
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rational::one()).primitive());
    }
    Ok(chain)
}

fn sign_variations(chain: &[UniPoly], t: &Rational) -> usize {
    let signs: Vec<i32> = chain.iter().map(|q| q.sign_at(t)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `1 + max|c_i| / |c_d|`: every real root lies strictly inside.
pub fn cauchy_bound(p: &UniPoly) -> Result<Rational> {
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    let max = p.coeffs[..p.degree()].iter().map(Signed::abs).max().unwrap_or_else(Rational::zero);
    Ok(Rational::one() + max / lead)
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &UniPoly) -> Result<usize> {
    let chain = sturm_chain(p)?;
    let b = cauchy_bound(p)?;
    Ok(sign_variations(&chain, &-b.clone()) - sign_variations(&chain, &b))
}

/// True iff every complex root of `p` is real.
pub fn is_real_rooted(p: &UniPoly) -> Result<bool> {
    let sf = square_free(p)?;
    Ok(count_real_roots(&sf)? == sf.degree())
}

/// Smallest index with a nonzero coefficient, and that coefficient's sign.
/// Near `t = 0`, `p(t)` has the sign of `c_l * t^l`.
pub fn first_nonzero_taylor(p: &UniPoly) -> Result<(usize, i32)> {
    p.coeffs
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .map(|(l, c)| (l, rational::sign(c)))
        .ok_or(Error::ZeroPolynomial)
}

/// Exact discriminant of a cubic `a t^3 + b t^2 + c t + d`.
pub fn cubic_discriminant(p: &UniPoly) -> Result<Rational> {
    if p.degree() != 3 {
        return Err(Error::InvalidInput("expected a cubic".into()));
    }
    let (d, c, b, a) = (&p.coeffs[0], &p.coeffs[1], &p.coeffs[2], &p.coeffs[3]);
    let r = |n: i64| rational::int(n);
    Ok(r(18) * a * b * c * d - r(4) * b * b * b * d + b * b * c * c - r(4) * a * c * c * c
        - r(27) * a * a * d * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn proportional(a: &UniPoly, b: &UniPoly) -> bool {
        a.degree() == b.degree() && {
            let ratio = a.leading().unwrap() / b.leading().unwrap();
            b.scale(&ratio) == *a
        }
    }

    #[test]
    fn square_free_examples() {
        // (t+1)^2 (t-2)
        let p = UniPoly::from_roots(&[int(-1), int(-1), int(2)]);
        assert!(proportional(&square_free(&p).unwrap(), &UniPoly::from_roots(&[int(-1), int(2)])));
        let t3 = UniPoly::from_ints(&[0, 0, 0, 1]);
        assert!(proportional(&square_free(&t3).unwrap(), &UniPoly::from_ints(&[0, 1])));
        let irreducible = UniPoly::from_ints(&[1, 0, 1]);
        assert!(proportional(&square_free(&irreducible).unwrap(), &irreducible));
        assert_eq!(square_free(&UniPoly::new(vec![])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_real_roots(&UniPoly::from_ints(&[0, -1, 0, 1])).unwrap(), 3);
        assert_eq!(count_real_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(count_real_roots(&UniPoly::from_ints(&[134, 276, 189, 43])).unwrap(), 1);
        assert_eq!(count_real_roots(&UniPoly::new(vec![])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn real_rootedness_examples() {
        assert!(is_real_rooted(&UniPoly::from_ints(&[-1, 0, 1])).unwrap());
        assert!(!is_real_rooted(&UniPoly::from_ints(&[134, 276, 189, 43])).unwrap());
        assert!(is_real_rooted(&UniPoly::from_ints(&[1, 2, 1])).unwrap());
        assert!(is_real_rooted(&UniPoly::from_ints(&[5])).unwrap());
    }

    #[test]
    fn discriminant_oracle_for_the_cubic_restriction() {
        let p = UniPoly::from_ints(&[134, 276, 189, 43]);
        assert_eq!(cubic_discriminant(&p).unwrap(), int(-324));
        // (t-1)(t-2)(t-3): discriminant ((1)(2)(1))^2 = 4
        assert_eq!(cubic_discriminant(&UniPoly::from_roots(&[int(1), int(2), int(3)])).unwrap(), int(4));
    }

    #[test]
    fn first_nonzero_taylor_examples() {
        assert_eq!(first_nonzero_taylor(&UniPoly::from_ints(&[0, 0, 0, 1, 2])).unwrap(), (3, 1));
        assert_eq!(first_nonzero_taylor(&UniPoly::from_ints(&[0, 0, -5, 0, 0, 1])).unwrap(), (2, -1));
        assert_eq!(first_nonzero_taylor(&UniPoly::from_ints(&[7, 1])).unwrap(), (0, 1));
        assert_eq!(first_nonzero_taylor(&UniPoly::new(vec![])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = UniPoly::from_ints(&[3, -2, 0, 1]);
        let a = frac(3, 2);
        let q = p.shift(&a);
        for t in [-2, 0, 1, 5] {
            assert_eq!(q.eval(&int(t)), p.eval(&(int(t) + &a)));
        }
    }

    /// Brute-force count: sign changes between consecutive grid points.
    fn grid_sign_changes(p: &UniPoly) -> usize {
        let b = cauchy_bound(p).unwrap();
        let step = frac(1, 64);
        let mut t = -b.clone() + frac(1, 128);
        let mut prev = p.sign_at(&t);
        let mut changes = 0;
        while t < b {
            t += &step;
            let s = p.sign_at(&t);
            if s != 0 && s != prev {
                changes += 1;
                prev = s;
            }
        }
        changes
    }

    fn quarter_roots() -> impl Strategy<Value = Vec<i64>> {
        // distinct roots k/4 with |k| <= 12
        proptest::collection::btree_set(-12i64..=12, 1..=6).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn sturm_count_agrees_with_grid_oracle(roots in quarter_roots(), lead in 1i64..5, neg in any::<bool>()) {
            let rs: Vec<Rational> = roots.iter().map(|&k| frac(k, 4)).collect();
            let sign = if neg { -lead } else { lead };
            let p = UniPoly::from_roots(&rs).scale(&int(sign));
            prop_assert_eq!(count_real_roots(&p).unwrap(), grid_sign_changes(&p));
            prop_assert_eq!(count_real_roots(&p).unwrap(), rs.len());
        }

        #[test]
        fn count_handles_multiplicity_and_complex_factors(
            roots in proptest::collection::vec(-6i64..=6, 1..=4),
            add_quadratic in any::<bool>(),
        ) {
            let rs: Vec<Rational> = roots.iter().map(|&k| frac(k, 2)).collect();
            let mut p = UniPoly::from_roots(&rs);
            if add_quadratic {
                p = p.mul(&UniPoly::from_ints(&[2, 0, 1]));
            }
            let distinct: std::collections::BTreeSet<i64> = roots.iter().copied().collect();
            prop_assert_eq!(count_real_roots(&p).unwrap(), distinct.len());
            prop_assert_eq!(is_real_rooted(&p).unwrap(), !add_quadratic);
        }

        #[test]
        fn real_rootedness_is_scale_and_shift_invariant(
            coeffs in proptest::collection::vec(-5i64..=5, 2..=6),
            c in prop_oneof![-7i64..=-1, 1i64..=7],
            a in -6i64..=6,
        ) {
            let p = UniPoly::from_ints(&coeffs);
            prop_assume!(!p.is_zero());
            let base = is_real_rooted(&p).unwrap();
            prop_assert_eq!(is_real_rooted(&p.scale(&int(c))).unwrap(), base);
            prop_assert_eq!(is_real_rooted(&p.shift(&frac(a, 3))).unwrap(), base);
        }
    }
}
