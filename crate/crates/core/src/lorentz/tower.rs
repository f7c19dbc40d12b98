use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::certificate::{Certificate, Witness};
use crate::cones::{ConeRegion, GeneratedCone};
use crate::error::{check_dim, Error, Result};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::realroots::{first_nonzero_taylor, UniPoly};
use crate::sampling;

/// `[f, D_v f, …, D_v^d f]` for a homogeneous form `f` of degree `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeTower {
    f: Polynomial,
    v: Vec<Rational>,
    tower: Vec<Polynomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MembershipClass {
    InteriorOpen,
    ClosedOnly,
    Outside,
}

impl ConeTower {
    pub fn new(f: Polynomial, v: Vec<Rational>) -> Result<Self> {
        let tower = f.derivative_tower(&v)?;
        Ok(ConeTower { f, v, tower })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn levels(&self) -> &[Polynomial] {
        &self.tower
    }

    pub fn degree(&self) -> usize {
        self.tower.len() - 1
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    /// Values of `tower[0..d]` at `x` (the constant top level is omitted).
    pub fn values(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.nvars(), x.len())?;
        self.tower[..self.degree()].iter().map(|p| p.eval(x)).collect()
    }

    pub fn membership(&self, x: &[Rational]) -> Result<MembershipClass> {
        let values = self.values(x)?;
        Ok(if values.iter().any(Signed::is_negative) {
            MembershipClass::Outside
        } else if values.iter().any(Zero::is_zero) {
            MembershipClass::ClosedOnly
        } else {
            MembershipClass::InteriorOpen
        })
    }
}

pub fn tower_membership(t: &ConeTower, x: &[Rational]) -> Result<MembershipClass> {
    t.membership(x)
}

impl ConeRegion for ConeTower {
    fn dim(&self) -> usize {
        self.nvars()
    }

    fn contains_point(&self, x: &[Rational]) -> bool {
        matches!(self.membership(x), Ok(MembershipClass::InteriorOpen | MembershipClass::ClosedOnly))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryVerdict {
    /// The level changes sign or is negative just past `x` along `v`.
    NotInterior,
    /// The leading behaviour along `v` is positive; interiority is not asserted.
    NecessaryConditionsHold,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryEntry {
    pub k: usize,
    /// Order of the first nonzero Taylor coefficient of `t ↦ tower[k](x + t v)`.
    pub order: usize,
    pub sign: i32,
    pub verdict: BoundaryVerdict,
}

/// For each vanishing level at a boundary point, the local behaviour along `v`.
pub fn boundary_classify(t: &ConeTower, x: &[Rational]) -> Result<Vec<BoundaryEntry>> {
    if t.membership(x)? != MembershipClass::ClosedOnly {
        return Err(Error::Precondition("boundary_classify needs a ClosedOnly point".into()));
    }
    let mut out = Vec::new();
    for (k, value) in t.values(x)?.iter().enumerate() {
        if !value.is_zero() {
            continue;
        }
        let restriction = UniPoly::new(t.tower[k].restriction_taylor(x, &t.v)?);
        let (order, sign) = first_nonzero_taylor(&restriction)
            .map_err(|_| Error::Precondition(format!("level {k} vanishes identically along v")))?;
        let verdict = if order % 2 == 1 || sign < 0 {
            BoundaryVerdict::NotInterior
        } else {
            BoundaryVerdict::NecessaryConditionsHold
        };
        out.push(BoundaryEntry { k, order, sign, verdict });
    }
    Ok(out)
}

const INCLUSION_SPOT_CHECKS: u64 = 32;

/// A point of `K` (generator first, then interior samples) outside the
/// closed tower cone.
pub fn inclusion_witness(k: &GeneratedCone, t: &ConeTower) -> Result<Option<Vec<Rational>>> {
    check_dim(t.nvars(), k.nvars())?;
    for g in k.generators() {
        if t.membership(g)? == MembershipClass::Outside {
            return Ok(Some(g.clone()));
        }
    }
    if k.rank() == k.nvars() {
        let mut rng = sampling::rng(0);
        for _ in 0..INCLUSION_SPOT_CHECKS {
            let x = k.interior_sample_with(&mut rng);
            if t.membership(&x)? == MembershipClass::Outside {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// `K ⊆ K(f, v)` on the generators of `K` and a fixed set of interior samples.
pub fn inclusion_check(k: &GeneratedCone, t: &ConeTower) -> Result<bool> {
    Ok(inclusion_witness(k, t)?.is_none())
}

/// Searches for `a, b` in the region with midpoint outside it. Points are
/// drawn from `[-2, 2]^n` on a `1/16` grid by rejection.
pub fn convexity_falsifier<R: ConeRegion + ?Sized>(region: &R, trials: u64, seed: u64) -> Certificate {
    let n = region.dim();
    let mut rng = sampling::rng(seed);
    let max_draws = 200 * trials.max(1);
    let mut draws = 0u64;
    let mut done = 0u64;
    let member = |rng: &mut sampling::SeededRng, draws: &mut u64| -> Option<Vec<Rational>> {
        while *draws < max_draws {
            *draws += 1;
            let p = sampling::box_point(rng, n, 2, 16);
            if region.contains_point(&p) {
                return Some(p);
            }
        }
        None
    };
    while done < trials {
        let Some(a) = member(&mut rng, &mut draws) else { break };
        let Some(b) = member(&mut rng, &mut draws) else { break };
        done += 1;
        let half = rational::frac(1, 2);
        let mid: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| (x + y) * &half).collect();
        if !region.contains_point(&mid) {
            return Certificate::no(Witness::Midpoint { a, b }, seed, done);
        }
    }
    let cert = Certificate::unknown(seed, done);
    if done < trials {
        cert.with_detail(format!("rejection sampling exhausted after {draws} draws"))
    } else {
        cert
    }
}

const LAMBDA_DOUBLINGS: u32 = 40;

/// Checks the path `x → x + λv → v + λv → v` stays in the open tower cone on
/// a grid of `grid` intervals per segment, doubling `λ` from 1 until the
/// middle segment passes. `false` means the search gave up, not that the
/// cone is disconnected.
pub fn connectivity_witness(t: &ConeTower, x: &[Rational], grid: usize) -> Result<bool> {
    if t.membership(x)? != MembershipClass::InteriorOpen {
        return Err(Error::Precondition("connectivity_witness needs an InteriorOpen point".into()));
    }
    let grid = grid.max(1);
    let v = t.v.clone();
    let open = |p: &[Rational]| -> Result<bool> { Ok(t.membership(p)? == MembershipClass::InteriorOpen) };
    let segment_ok = |from: &[Rational], to: &[Rational]| -> Result<bool> {
        for i in 0..=grid {
            let s = rational::frac(i as i64, grid as i64);
            let p: Vec<Rational> = from.iter().zip(to).map(|(a, b)| a + (b - a) * &s).collect();
            if !open(&p)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let shifted = |p: &[Rational], lambda: &Rational| -> Vec<Rational> {
        p.iter().zip(&v).map(|(a, b)| a + b * lambda).collect()
    };
    let mut lambda = Rational::one();
    for _ in 0..=LAMBDA_DOUBLINGS {
        let x_up = shifted(x, &lambda);
        let v_up = shifted(&v, &lambda);
        if segment_ok(&x_up, &v_up)? {
            return Ok(segment_ok(x, &x_up)? && segment_ok(&v_up, &v)?);
        }
        lambda *= rational::int(2);
    }
    Ok(false)
}
