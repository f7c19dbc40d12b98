use num_traits::{Signed, Zero};

use crate::certificate::{Certificate, Witness};
use crate::cones::GeneratedCone;
use crate::error::{check_dim, Error, Result};
use crate::linalg::SymMatrix;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::realroots::{is_real_rooted, UniPoly};
use crate::sampling::{self, SeededRng};

use super::rayleigh::rayleigh_matrix;

/// Interior pairs sampled per quadratic form.
const PAIR_SAMPLES: usize = 16;
/// Interior pairs sampled per derived form inside the tuple checks.
const TUPLE_PAIR_SAMPLES: usize = 4;
/// Upper bound on generator tuples enumerated by `k_lorentzian_check`.
const MAX_GENERATOR_TUPLES: usize = 20_000;
/// Relative floor for eigenvalues in log-concavity tests.
const PSD_TOL: f64 = 1e-9;

fn require_proper(k: &GeneratedCone) -> Result<()> {
    if k.properness().proper() {
        Ok(())
    } else {
        Err(Error::Precondition("cone must be pointed and full-dimensional".into()))
    }
}

enum QuadVerdict {
    Fail(Witness),
    Strict,
    NoViolation,
}

/// Shared core of the quadratic test; `samples` counts the work done.
fn check_quadratic(q: &SymMatrix, k: &GeneratedCone, rng: &mut SeededRng, pairs: usize, samples: &mut u64) -> Result<QuadVerdict> {
    let inertia = q.inertia();
    *samples += 1;
    if inertia.n_plus != 1 {
        return Ok(QuadVerdict::Fail(Witness::Inertia { inertia }));
    }
    let gens = k.generators();
    for (i, ui) in gens.iter().enumerate() {
        for (j, uj) in gens.iter().enumerate().skip(i) {
            *samples += 1;
            let value = q.bilinear(ui, uj)?;
            if value.is_negative() {
                return Ok(QuadVerdict::Fail(Witness::GeneratorPair { i, j, value }));
            }
        }
    }
    let mut first = None;
    for _ in 0..pairs {
        *samples += 1;
        let x = k.interior_sample_with(rng);
        let y = k.interior_sample_with(rng);
        let value = q.bilinear(&y, &x)?;
        if !value.is_positive() {
            return Ok(QuadVerdict::Fail(Witness::PointPair { x, y, value }));
        }
        first.get_or_insert(x);
    }
    let x0 = first.unwrap_or_else(|| k.interior_sample_with(rng));
    if inertia.n_zero == 0 && q.quadratic(&x0)?.is_positive() {
        Ok(QuadVerdict::Strict)
    } else {
        Ok(QuadVerdict::NoViolation)
    }
}

/// Whether `xᵀ Q x` is Lorentzian on `K`: one positive eigenvalue and
/// `yᵀ Q x > 0` on `int K × int K`. With signature `(1, n−1)`, nonnegative
/// generator pairings and a positive interior value, reverse Cauchy–Schwarz
/// settles the interior condition, giving `CertifiedYes`.
pub fn quadratic_lorentzian(q: &SymMatrix, k: &GeneratedCone, seed: u64) -> Result<Certificate> {
    check_dim(k.nvars(), q.dim())?;
    require_proper(k)?;
    let mut rng = sampling::rng(seed);
    let mut used = 0;
    Ok(match check_quadratic(q, k, &mut rng, PAIR_SAMPLES, &mut used)? {
        QuadVerdict::Fail(w) => Certificate::no(w, seed, used),
        QuadVerdict::Strict => Certificate::yes(seed, used),
        QuadVerdict::NoViolation => Certificate::unknown(seed, used),
    })
}

fn derive_along(f: &Polynomial, dirs: &[Vec<Rational>]) -> Result<Polynomial> {
    dirs.iter().try_fold(f.clone(), |g, a| g.dir_derivative(a))
}

/// Multisets of size `r` from `0..m`, in lexicographic order.
fn multisets(m: usize, r: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut cur = vec![0usize; r];
    loop {
        out.push(cur.clone());
        if out.len() >= cap {
            return out;
        }
        let Some(pos) = (0..r).rev().find(|&p| cur[p] + 1 < m) else {
            return out;
        };
        let next = cur[pos] + 1;
        for c in &mut cur[pos..] {
            *c = next;
        }
    }
}

/// Semi-decides the cone-Lorentzian property of a homogeneous form.
///
/// Generator tuples (on the boundary of `K`) can only violate the closed
/// conditions: two or more positive eigenvalues, or a negative generator
/// pairing. Sampled interior tuples get the full quadratic test. Degree 2
/// needs no tuple and is decided like a single quadratic; degree `≤ 1`
/// reduces to nonnegativity on the generators.
pub fn k_lorentzian_check(f: &Polynomial, k: &GeneratedCone, samples: u64, seed: u64) -> Result<Certificate> {
    check_dim(k.nvars(), f.nvars())?;
    let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    require_proper(k)?;
    let mut used = 0u64;

    if d <= 1 {
        for g in k.generators() {
            used += 1;
            let value = f.eval(g)?;
            if value.is_negative() {
                return Ok(Certificate::no(Witness::Vector { x: g.clone(), value }, seed, used));
            }
        }
        return Ok(Certificate::yes(seed, used));
    }
    if d == 2 {
        return quadratic_lorentzian(&f.quadratic_form_matrix()?, k, seed);
    }

    let gens = k.generators();
    let tuples = multisets(gens.len(), d - 2, MAX_GENERATOR_TUPLES);
    let truncated = tuples.len() >= MAX_GENERATOR_TUPLES;
    for t in &tuples {
        used += 1;
        let dirs: Vec<Vec<Rational>> = t.iter().map(|&i| gens[i].clone()).collect();
        let q = derive_along(f, &dirs)?.quadratic_form_matrix()?;
        let inertia = q.inertia();
        let cause = if inertia.n_plus >= 2 {
            Some(Witness::Inertia { inertia })
        } else {
            negative_generator_pair(&q, gens)?
        };
        if let Some(cause) = cause {
            return Ok(Certificate::no(Witness::DirectionTuple { directions: dirs, cause: Box::new(cause) }, seed, used));
        }
    }

    let mut rng = sampling::rng(seed);
    for _ in 0..samples {
        used += 1;
        let dirs: Vec<Vec<Rational>> = (0..d - 2).map(|_| k.interior_sample_with(&mut rng)).collect();
        let q = derive_along(f, &dirs)?.quadratic_form_matrix()?;
        let mut inner = 0;
        if let QuadVerdict::Fail(cause) = check_quadratic(&q, k, &mut rng, TUPLE_PAIR_SAMPLES, &mut inner)? {
            return Ok(Certificate::no(Witness::DirectionTuple { directions: dirs, cause: Box::new(cause) }, seed, used));
        }
    }
    let cert = Certificate::unknown(seed, used);
    Ok(if truncated {
        cert.with_detail(format!("generator tuples truncated at {MAX_GENERATOR_TUPLES}"))
    } else {
        cert
    })
}

fn negative_generator_pair(q: &SymMatrix, gens: &[Vec<Rational>]) -> Result<Option<Witness>> {
    for (i, ui) in gens.iter().enumerate() {
        for (j, uj) in gens.iter().enumerate().skip(i) {
            let value = q.bilinear(ui, uj)?;
            if value.is_negative() {
                return Ok(Some(Witness::GeneratorPair { i, j, value }));
            }
        }
    }
    Ok(None)
}

/// Samples derivative strings `g = D_{a_1}…D_{a_m} f` (`m < d`, interior
/// `a_i`) and interior points `x`, and checks `g(x) > 0` and that
/// `M_g(x)` is positive semidefinite.
pub fn clc_check(f: &Polynomial, k: &GeneratedCone, samples: u64, seed: u64) -> Result<Certificate> {
    check_dim(k.nvars(), f.nvars())?;
    let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    require_proper(k)?;
    let mut rng = sampling::rng(seed);
    let mut used = 0u64;
    if d == 0 {
        let c = f.constant_value().unwrap_or_else(Rational::zero);
        let x = k.interior_sample_with(&mut rng);
        return Ok(if c.is_positive() {
            Certificate::unknown(seed, 1)
        } else {
            Certificate::no(Witness::NonPositive { directions: vec![], x, value: c }, seed, 1)
        });
    }
    for s in 0..samples {
        used += 1;
        let m = (s % d as u64) as usize;
        let directions: Vec<Vec<Rational>> = (0..m).map(|_| k.interior_sample_with(&mut rng)).collect();
        let x = k.interior_sample_with(&mut rng);
        let g = derive_along(f, &directions)?;
        let value = g.eval(&x)?;
        if !value.is_positive() {
            return Ok(Certificate::no(Witness::NonPositive { directions, x, value }, seed, used));
        }
        let mg = rayleigh_matrix(&g, &x)?;
        let scale = rational::to_f64(&mg.max_abs()).max(f64::MIN_POSITIVE);
        let min_eigenvalue = mg.eigenvalues().first().copied().unwrap_or(0.0);
        if min_eigenvalue < -PSD_TOL * scale {
            return Ok(Certificate::no(Witness::LogConcavity { directions, x, min_eigenvalue }, seed, used));
        }
    }
    Ok(Certificate::unknown(seed, used))
}

/// Ultra log-concavity of the coefficient sequence of a bivariate form
/// `Σ c_k x_1^{n-k} x_2^k`: `(c_k/C(n,k))² ≥ (c_{k-1}/C(n,k-1)) (c_{k+1}/C(n,k+1))`.
pub fn ulc_bivariate(f: &Polynomial) -> Result<bool> {
    check_dim(2, f.nvars())?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let coeffs: Vec<Rational> = (0..=n).map(|k| f.coefficient(&[(n - k) as u32, k as u32])).collect();
    if let Some(k) = coeffs.iter().position(Signed::is_negative) {
        return Err(Error::InvalidInput(format!("coefficient of x1^{}x2^{k} is negative", n - k)));
    }
    let support: Vec<usize> = (0..=n).filter(|&k| !coeffs[k].is_zero()).collect();
    let (lo, hi) = (support[0], support[support.len() - 1]);
    if support.len() != hi - lo + 1 {
        return Err(Error::InvalidInput("coefficient support has internal zeros".into()));
    }
    let normalized: Vec<Rational> = coeffs.iter().enumerate().map(|(k, c)| c / rational::binomial(n, k)).collect();
    Ok((1..n).all(|k| &normalized[k] * &normalized[k] >= &normalized[k - 1] * &normalized[k + 1]))
}

const LATTICE_RADIUS: i64 = 3;
const LATTICE_CAP: usize = 4096;

/// Real-rootedness of `t ↦ f(x + t e)` over integer points of `[-3, 3]^n`
/// (positive points first) and then `samples` seeded rational points of the
/// same cube with denominators up to 8. The witness is the first failure.
pub fn hyperbolicity_check(f: &Polynomial, e: &[Rational], samples: u64, seed: u64) -> Result<Certificate> {
    check_dim(f.nvars(), e.len())?;
    f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if f.eval(e)?.is_zero() {
        return Err(Error::Precondition("f(e) must be nonzero".into()));
    }
    let n = f.nvars();
    let mut used = 0u64;
    let test = |x: Vec<Rational>, used: &mut u64| -> Result<Option<Certificate>> {
        *used += 1;
        let p = UniPoly::new(f.restriction_taylor(&x, e)?);
        Ok((!is_real_rooted(&p)?).then(|| Certificate::no(Witness::Point { x }, seed, *used)))
    };
    for p in sampling::lattice_points(n, LATTICE_RADIUS, LATTICE_CAP) {
        let x = p.iter().map(|&c| rational::int(c)).collect();
        if let Some(c) = test(x, &mut used)? {
            return Ok(c);
        }
    }
    let mut rng = sampling::rng(seed);
    for _ in 0..samples {
        let x = (0..n)
            .map(|_| {
                let den = sampling::integer_between(&mut rng, 1, 8);
                sampling::rational_between(&mut rng, -LATTICE_RADIUS * den, LATTICE_RADIUS * den, den)
            })
            .collect();
        if let Some(c) = test(x, &mut used)? {
            return Ok(c);
        }
    }
    Ok(Certificate::unknown(seed, used))
}
