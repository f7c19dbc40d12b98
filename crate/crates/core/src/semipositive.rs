//! Generating polynomials `f_A = ∏ (A x)_i`, hyperbolic directions and the
//! cones `{x : A x ≥ 0}`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::certificate::{Certificate, Witness};
use crate::cones::{ContainsMode, GeneratedCone};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::sampling;

/// Largest dimension for which halfspace cones are converted to generators.
pub const MAX_HALFSPACE_DIM: usize = 6;

/// A nonsingular matrix with its generating polynomial and the direction
/// `e` solving `A e = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemipositiveModel {
    a: Matrix,
    f_a: Polynomial,
    e: Vec<Rational>,
}

impl SemipositiveModel {
    pub fn new(a: Matrix) -> Result<Self> {
        let e = hyperbolic_direction(&a)?;
        let f_a = generating_polynomial(&a)?;
        Ok(SemipositiveModel { a, f_a, e })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn generating_polynomial(&self) -> &Polynomial {
        &self.f_a
    }

    pub fn direction(&self) -> &[Rational] {
        &self.e
    }
}

fn require_square(a: &Matrix) -> Result<()> {
    if a.is_square() && a.rows() > 0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("matrix must be square, got {}x{}", a.rows(), a.cols())))
    }
}

/// `∏_i (Σ_j a_ij x_j)`, expanded exactly.
pub fn generating_polynomial(a: &Matrix) -> Result<Polynomial> {
    require_square(a)?;
    let n = a.cols();
    Ok((0..a.rows()).fold(Polynomial::constant(n, Rational::one()), |acc, i| {
        &acc * &Polynomial::linear(a.row(i))
    }))
}

/// The solution of `A e = 1`.
pub fn hyperbolic_direction(a: &Matrix) -> Result<Vec<Rational>> {
    require_square(a)?;
    a.solve(&vec![Rational::one(); a.rows()])
}

/// `A x ≥ 0` (or `> 0` when `strict`), componentwise.
pub fn hyp_cone_contains(a: &Matrix, x: &[Rational], strict: bool) -> Result<bool> {
    let y = a.mul_vec(x)?;
    Ok(if strict { y.iter().all(Signed::is_positive) } else { y.iter().all(|v| !v.is_negative()) })
}

/// `x ∈ K̃` and `A x ≥ 0`.
pub fn semipositive_cone_contains(a: &Matrix, x: &[Rational], ktilde: &GeneratedCone) -> Result<bool> {
    check_dim(ktilde.nvars(), x.len())?;
    Ok(hyp_cone_contains(a, x, false)? && ktilde.contains(x, ContainsMode::Exact)?)
}

/// Whether `A(int K̃) ∩ int K̃` is nonempty. For the orthant this is the
/// exact feasibility of `{x ≥ 1, A x ≥ 1}`; otherwise seeded interior points
/// are tried and a miss is `Unknown`.
pub fn is_semipositive(a: &Matrix, ktilde: &GeneratedCone, samples: u64, seed: u64) -> Result<Certificate> {
    require_square(a)?;
    check_dim(ktilde.nvars(), a.cols())?;
    if ktilde.rank() < ktilde.nvars() {
        return Err(Error::NotFullDimensional);
    }
    if ktilde.is_orthant() {
        return Ok(orthant_semipositive(a, seed));
    }
    let mut rng = sampling::rng(seed);
    for s in 1..=samples {
        let x = ktilde.interior_sample_with(&mut rng);
        if ktilde.contains_interior(&a.mul_vec(&x)?)? {
            let mut c = Certificate::yes(seed, s);
            c.witness = Some(Witness::Point { x });
            return Ok(c);
        }
    }
    Ok(Certificate::unknown(seed, samples))
}

fn orthant_semipositive(a: &Matrix, seed: u64) -> Certificate {
    let n = a.cols();
    // x = 1 + y, A(1 + y) - s = 1 with y, s ≥ 0.
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend((0..n).map(|k| if k == i { -Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let rhs: Vec<Rational> = (0..n)
        .map(|i| Rational::one() - a.row(i).iter().fold(Rational::zero(), |s, v| s + v))
        .collect();
    match crate::lp::find_nonnegative_solution(&rows, &rhs) {
        Some(sol) => {
            let x = sol[..n].iter().map(|y| y + Rational::one()).collect();
            let mut c = Certificate::yes(seed, 1);
            c.witness = Some(Witness::Point { x });
            c
        }
        None => Certificate::no(Witness::Infeasible { reason: "{x >= 1, Ax >= 1} is empty".into() }, seed, 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConePreservation {
    /// `A(K) ⊆ K`.
    pub forward: bool,
    /// `A(K) = K`.
    pub equality: bool,
}

/// Exact checks of `A u_i ∈ K` and `A⁻¹ u_i ∈ K` over the generators.
pub fn preserves_cone(a: &Matrix, k: &GeneratedCone) -> Result<ConePreservation> {
    require_square(a)?;
    check_dim(k.nvars(), a.cols())?;
    let inv = a.inverse()?;
    let maps_into = |m: &Matrix| -> Result<bool> {
        for g in k.generators() {
            if !k.contains(&m.mul_vec(g)?, ContainsMode::Exact)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let forward = maps_into(a)?;
    let equality = forward && maps_into(&inv)?;
    Ok(ConePreservation { forward, equality })
}

/// Extreme rays of the pointed cone `{x : B x ≥ 0}` by enumerating
/// `(n−1)`-row subsystems. Limited to `n ≤ 6`.
pub fn halfspace_cone(b: &[Vec<Rational>], n: usize) -> Result<GeneratedCone> {
    if n == 0 || n > MAX_HALFSPACE_DIM {
        return Err(Error::InvalidInput(format!("halfspace cones are supported for 1 <= n <= {MAX_HALFSPACE_DIM}")));
    }
    for (i, row) in b.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput(format!("rows[{i}] must have {n} entries")));
        }
    }
    if b.is_empty() || Matrix::from_rows(b)?.rank() < n {
        return Err(Error::Precondition("halfspace system does not define a pointed cone".into()));
    }
    let satisfies = |r: &[Rational]| b.iter().all(|row| !crate::rational::dot(row, r).is_negative());
    let mut rays = Vec::new();
    for subset in combinations(b.len(), n - 1) {
        let directions = if n == 1 {
            vec![vec![Rational::one()]]
        } else {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| b[i].clone()).collect();
            let basis = Matrix::from_rows(&rows)?.null_space();
            if basis.len() != 1 {
                continue;
            }
            basis
        };
        for r in directions {
            let neg: Vec<Rational> = r.iter().map(|v| -v).collect();
            for cand in [r, neg] {
                if satisfies(&cand) {
                    rays.push(cand);
                }
            }
        }
    }
    GeneratedCone::new(n, rays)
}

/// `{x : A x ≥ 0}` as a generated cone.
pub fn hyperbolicity_cone(a: &Matrix) -> Result<GeneratedCone> {
    require_square(a)?;
    halfspace_cone(&a.to_rows(), a.cols())
}

/// `{x ≥ 0 : A x ≥ 0}` as a generated cone.
pub fn semipositive_cone(a: &Matrix) -> Result<GeneratedCone> {
    require_square(a)?;
    let n = a.cols();
    let mut rows = Matrix::identity(n).to_rows();
    rows.extend(a.to_rows());
    halfspace_cone(&rows, n)
}

fn combinations(m: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    rec(0, m, r, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMatrix;
    use crate::rational::{frac, int, vec_of};
    use crate::Status;
    use proptest::prelude::*;

    fn example_a() -> Matrix {
        Matrix::from_int_rows(&[&[-1, 1, 1, 1], &[1, -1, 1, 1], &[1, 1, -1, 1], &[1, 1, 1, -1]]).unwrap()
    }

    #[test]
    fn generating_polynomial_examples() {
        let f = generating_polynomial(&Matrix::identity(3)).unwrap();
        assert_eq!(f, Polynomial::from_int_terms(3, &[(&[1, 1, 1], 1)]).unwrap());
        let f = generating_polynomial(&Matrix::from_int_rows(&[&[1, 1], &[1, -1]]).unwrap()).unwrap();
        assert_eq!(f, Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], -1)]).unwrap());

        let mut terms: Vec<(Vec<u32>, i64)> = Vec::new();
        for i in 0..4 {
            let mut e = vec![0; 4];
            e[i] = 4;
            terms.push((e, -1));
            for j in i + 1..4 {
                let mut e = vec![0; 4];
                e[i] = 2;
                e[j] = 2;
                terms.push((e, 2));
            }
        }
        terms.push((vec![1, 1, 1, 1], 8));
        let refs: Vec<(&[u32], i64)> = terms.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
        assert_eq!(generating_polynomial(&example_a()).unwrap(), Polynomial::from_int_terms(4, &refs).unwrap());
        assert!(generating_polynomial(&Matrix::from_int_rows(&[&[1, 2]]).unwrap()).is_err());
    }

    #[test]
    fn hessian_at_ones_is_scaled_adjacency() {
        let f = generating_polynomial(&example_a()).unwrap();
        let h = f.hessian(&vec_of(&[1, 1, 1, 1])).unwrap();
        let mut rows = vec![vec![int(16); 4]; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = int(0);
        }
        assert_eq!(h, SymMatrix::from_rows(&rows).unwrap());
    }

    #[test]
    fn direction_examples() {
        assert_eq!(hyperbolic_direction(&Matrix::identity(3)).unwrap(), vec_of(&[1, 1, 1]));
        assert_eq!(hyperbolic_direction(&example_a()).unwrap(), vec![frac(1, 2); 4]);
        let d = Matrix::from_int_rows(&[&[2, 0], &[0, 4]]).unwrap();
        assert_eq!(hyperbolic_direction(&d).unwrap(), vec![frac(1, 2), frac(1, 4)]);
        let sing = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(hyperbolic_direction(&sing), Err(Error::SingularMatrix));
        let m = SemipositiveModel::new(example_a()).unwrap();
        assert_eq!(m.generating_polynomial().eval(m.direction()).unwrap(), int(1));
    }

    #[test]
    fn membership_examples() {
        let a = example_a();
        assert!(hyp_cone_contains(&a, &vec_of(&[1, 1, 1, 1]), false).unwrap());
        assert!(!hyp_cone_contains(&a, &vec_of(&[1, 0, 0, 0]), false).unwrap());
        assert!(hyp_cone_contains(&Matrix::identity(2), &vec_of(&[1, 0]), false).unwrap());
        assert!(!hyp_cone_contains(&Matrix::identity(2), &vec_of(&[1, 0]), true).unwrap());
        let k = GeneratedCone::orthant(4);
        assert!(semipositive_cone_contains(&a, &vec_of(&[1, 1, 1, 1]), &k).unwrap());
        assert!(!semipositive_cone_contains(&a, &vec_of(&[1, 0, 0, 0]), &k).unwrap());
        assert!(semipositive_cone_contains(&a, &vec_of(&[0, 0, 0, 0]), &k).unwrap());
    }

    #[test]
    fn semipositivity_examples() {
        let k = GeneratedCone::orthant(3);
        assert!(is_semipositive(&Matrix::identity(3), &k, 10, 0).unwrap().is_yes());
        let neg = Matrix::identity(3).scale(&int(-1));
        assert_eq!(is_semipositive(&neg, &k, 10, 0).unwrap().status, Status::CertifiedNo);
        let c = is_semipositive(&example_a(), &GeneratedCone::orthant(4), 10, 0).unwrap();
        assert!(c.is_yes());
        let Some(Witness::Point { x }) = c.witness else { panic!() };
        assert!(hyp_cone_contains(&example_a(), &x, true).unwrap());

        let wedge = GeneratedCone::from_int_generators(2, &[&[1, 0], &[1, 1]]).unwrap();
        assert!(is_semipositive(&Matrix::identity(2), &wedge, 10, 0).unwrap().is_yes());
        let flat = GeneratedCone::from_int_generators(2, &[&[1, 0]]).unwrap();
        assert_eq!(is_semipositive(&Matrix::identity(2), &flat, 10, 0), Err(Error::NotFullDimensional));
    }

    #[test]
    fn preservation_examples() {
        let k = GeneratedCone::orthant(2);
        let two = Matrix::identity(2).scale(&int(2));
        assert_eq!(preserves_cone(&two, &k).unwrap(), ConePreservation { forward: true, equality: true });
        let rot = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]).unwrap();
        assert_eq!(preserves_cone(&rot, &k).unwrap(), ConePreservation { forward: false, equality: false });
        let perm = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(preserves_cone(&perm, &k).unwrap(), ConePreservation { forward: true, equality: true });
    }

    #[test]
    fn example_matrix_does_not_preserve_its_cone() {
        let a = example_a();
        let cone = hyperbolicity_cone(&a).unwrap();
        assert_eq!(cone.generators().len(), 4);
        for j in 0..4 {
            let col = a.column(j);
            assert!(cone.contains(&col, ContainsMode::Exact).unwrap());
        }
        // A^2 = 4I sends column j to 4 e_j, and A e_1 has a negative entry.
        assert_eq!(a.mul(&a).unwrap(), Matrix::identity(4).scale(&int(4)));
        assert_eq!(preserves_cone(&a, &cone).unwrap(), ConePreservation { forward: false, equality: false });
    }

    #[test]
    fn halfspace_cone_of_the_orthant_and_a_wedge() {
        let k = semipositive_cone(&Matrix::identity(3)).unwrap();
        assert!(k.is_orthant());
        let a = Matrix::from_int_rows(&[&[1, -1], &[0, 1]]).unwrap();
        let w = semipositive_cone(&a).unwrap();
        // {x >= 0, x1 >= x2}: rays (1,0) and (1,1).
        assert_eq!(w.generators().len(), 2);
        assert!(w.contains(&vec_of(&[1, 1]), ContainsMode::Exact).unwrap());
        assert!(!w.contains(&vec_of(&[0, 1]), ContainsMode::Exact).unwrap());
        let line = vec![vec_of(&[1, 0])];
        assert!(halfspace_cone(&line, 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn generating_polynomial_is_the_product_of_rows(
            entries in proptest::collection::vec(-4i64..=4, 9),
            x in proptest::collection::vec(-5i64..=5, 3),
        ) {
            let a = Matrix::from_rows(&entries.chunks(3).map(vec_of).collect::<Vec<_>>()).unwrap();
            let f = generating_polynomial(&a).unwrap();
            let xr = vec_of(&x);
            let ax = a.mul_vec(&xr).unwrap();
            let prod = ax.iter().fold(Rational::one(), |acc, v| acc * v);
            prop_assert_eq!(f.eval(&xr).unwrap(), prod);
            if let Ok(e) = hyperbolic_direction(&a) {
                prop_assert_eq!(f.eval(&e).unwrap(), Rational::one());
            }
        }

        #[test]
        fn halfspace_generators_satisfy_every_inequality(entries in proptest::collection::vec(-3i64..=3, 9)) {
            let a = Matrix::from_rows(&entries.chunks(3).map(vec_of).collect::<Vec<_>>()).unwrap();
            let k = semipositive_cone(&a).unwrap();
            for g in k.generators() {
                prop_assert!(g.iter().all(|v| !v.is_negative()));
                prop_assert!(hyp_cone_contains(&a, g, false).unwrap());
            }
        }
    }
}
