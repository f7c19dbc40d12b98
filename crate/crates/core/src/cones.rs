//! Finitely generated convex cones `cone{u_1, …, u_m}`.
//!
//! Cones are stored by generators only. Exact membership and pointedness go
//! through the rational simplex in [`crate::lp`]; tolerance membership and
//! Euclidean projection go through floating NNLS.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Witness};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{Matrix, SymMatrix};
use crate::lp::find_nonnegative_solution;
use crate::nnls::nnls;
use crate::rational::{self, Rational};
use crate::sampling::{self, SeededRng};

/// Default tolerance for floating membership and KKT checks.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContainsMode {
    Exact,
    Tolerance(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeFlags {
    pub pointed: bool,
    pub full_dimensional: bool,
}

impl ConeFlags {
    /// Finitely generated cones are closed, so properness needs only these two.
    pub fn proper(&self) -> bool {
        self.pointed && self.full_dimensional
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeJson", into = "ConeJson")]
pub struct GeneratedCone {
    nvars: usize,
    generators: Vec<Vec<Rational>>,
    /// Generators as columns, for the floating paths.
    columns: DMatrix<f64>,
}

impl GeneratedCone {
    /// Builds `cone{generators}`. Zero generators are rejected; generators
    /// that are positive multiples of earlier ones are dropped.
    pub fn new(nvars: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput("cone dimension must be positive".into()));
        }
        let mut kept: Vec<Vec<Rational>> = Vec::with_capacity(generators.len());
        let mut canon: Vec<Vec<Rational>> = Vec::with_capacity(generators.len());
        for (k, g) in generators.into_iter().enumerate() {
            check_dim(nvars, g.len())?;
            let scale = rational::max_abs(&g);
            if scale.is_zero() {
                return Err(Error::InvalidInput(format!("generators[{k}] is the zero vector")));
            }
            let c: Vec<Rational> = g.iter().map(|x| x / &scale).collect();
            if !canon.contains(&c) {
                canon.push(c);
                kept.push(g);
            }
        }
        let columns = DMatrix::from_fn(nvars, kept.len(), |i, j| rational::to_f64(&kept[j][i]));
        Ok(GeneratedCone { nvars, generators: kept, columns })
    }

    pub fn from_int_generators(nvars: usize, gens: &[&[i64]]) -> Result<Self> {
        Self::new(nvars, gens.iter().map(|g| rational::vec_of(g)).collect())
    }

    /// The nonnegative orthant `cone{e_1, …, e_n}`.
    pub fn orthant(n: usize) -> Self {
        let gens = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::new(n, gens).expect("orthant generators are valid")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn generators_f64(&self) -> Vec<Vec<f64>> {
        self.generators.iter().map(|g| rational::vec_to_f64(g)).collect()
    }

    /// Generators are exactly the coordinate rays.
    pub fn is_orthant(&self) -> bool {
        if self.generators.len() != self.nvars {
            return false;
        }
        let mut seen = vec![false; self.nvars];
        for g in &self.generators {
            let nz: Vec<usize> = (0..self.nvars).filter(|&i| !g[i].is_zero()).collect();
            match nz.as_slice() {
                [i] if g[*i].is_positive() && !seen[*i] => seen[*i] = true,
                _ => return false,
            }
        }
        true
    }

    pub fn contains(&self, x: &[Rational], mode: ContainsMode) -> Result<bool> {
        check_dim(self.nvars, x.len())?;
        match mode {
            ContainsMode::Exact => Ok(self.representation(x).is_some()),
            ContainsMode::Tolerance(tol) => self.contains_f64(&rational::vec_to_f64(x), tol),
        }
    }

    /// Nonnegative coefficients `λ` with `Σ λ_i u_i = x`, if any.
    pub fn representation(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        if self.generators.is_empty() {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        let rows: Vec<Vec<Rational>> = (0..self.nvars)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect();
        find_nonnegative_solution(&rows, x)
    }

    /// Membership up to an NNLS residual of `tol · max(1, ‖x‖)`.
    pub fn contains_f64(&self, x: &[f64], tol: f64) -> Result<bool> {
        check_dim(self.nvars, x.len())?;
        let norm = crate::linalg::norm(x);
        if self.generators.is_empty() {
            return Ok(norm <= tol);
        }
        if self.is_orthant() {
            return Ok(x.iter().all(|&v| v >= -tol * norm.max(1.0)));
        }
        let sol = nnls(&self.columns, &DVector::from_column_slice(x))?;
        Ok(sol.residual <= tol * norm.max(1.0))
    }

    /// Exact test for `x ∈ int K`: `x = Σ λ_i u_i` with every `λ_i > 0`.
    pub fn contains_interior(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.nvars, x.len())?;
        let flags = self.properness();
        if !flags.full_dimensional {
            return Ok(false);
        }
        if !flags.pointed {
            // Not pointed and full-dimensional: every representation can be
            // shifted along the lineality, so membership suffices only when
            // K is the whole space; fall back to the generic LP below.
        }
        // G μ - t x = -G 1 with μ, t ≥ 0, i.e. t x = G (μ + 1).
        let m = self.generators.len();
        let rows: Vec<Vec<Rational>> = (0..self.nvars)
            .map(|i| {
                let mut r: Vec<Rational> = self.generators.iter().map(|g| g[i].clone()).collect();
                r.push(-x[i].clone());
                r
            })
            .collect();
        let rhs: Vec<Rational> = (0..self.nvars)
            .map(|i| -self.generators.iter().fold(Rational::zero(), |acc, g| acc + &g[i]))
            .collect();
        Ok(match find_nonnegative_solution(&rows, &rhs) {
            Some(sol) => sol[m].is_positive(),
            None => false,
        })
    }

    fn require_full_dimensional(&self) -> Result<()> {
        if self.rank() < self.nvars {
            Err(Error::NotFullDimensional)
        } else {
            Ok(())
        }
    }

    pub fn rank(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        Matrix::from_rows(&self.generators).expect("generators share a length").rank()
    }

    /// `Σ λ_i u_i` with `λ_i` drawn from `[1/2, 3/2]`; deterministic in `seed`.
    pub fn interior_sample(&self, seed: u64) -> Result<Vec<Rational>> {
        self.require_full_dimensional()?;
        Ok(self.interior_sample_with(&mut sampling::rng(seed)))
    }

    /// Interior sample from a caller-managed stream. Assumes full dimension.
    pub fn interior_sample_with(&self, rng: &mut SeededRng) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.nvars];
        for g in &self.generators {
            let lambda = sampling::rational_between(rng, 32, 96, 64);
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += &lambda * gi;
            }
        }
        x
    }

    pub fn properness(&self) -> ConeFlags {
        ConeFlags { pointed: self.is_pointed(), full_dimensional: self.rank() == self.nvars }
    }

    /// Pointed iff some `c` has `cᵀ u_i ≥ 1` for every generator.
    fn is_pointed(&self) -> bool {
        let n = self.nvars;
        let m = self.generators.len();
        if m == 0 {
            return true;
        }
        // Variables: c⁺ (n), c⁻ (n), slack (m).
        let rows: Vec<Vec<Rational>> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut r = Vec::with_capacity(2 * n + m);
                r.extend(g.iter().cloned());
                r.extend(g.iter().map(|v| -v));
                r.extend((0..m).map(|k| if k == i { -Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        find_nonnegative_solution(&rows, &vec![Rational::one(); m]).is_some()
    }

    /// `y ∈ K*` iff `yᵀ u_i ≥ 0` for every generator.
    pub fn dual_contains(&self, y: &[Rational]) -> Result<bool> {
        check_dim(self.nvars, y.len())?;
        Ok(self.generators.iter().all(|g| !rational::dot(g, y).is_negative()))
    }

    /// Acuteness with respect to `Q`: `u_iᵀ Q u_j ≥ 0` for all generator
    /// pairs. By bilinearity this finite check is complete, so the result is
    /// never `Unknown`.
    pub fn acute_wrt(&self, q: &SymMatrix, seed: u64) -> Result<Certificate> {
        check_dim(self.nvars, q.dim())?;
        let mut checked = 0u64;
        for (i, ui) in self.generators.iter().enumerate() {
            for (j, uj) in self.generators.iter().enumerate().skip(i) {
                checked += 1;
                let value = q.bilinear(ui, uj)?;
                if value.is_negative() {
                    return Ok(Certificate::no(Witness::GeneratorPair { i, j, value }, seed, checked));
                }
            }
        }
        Ok(Certificate::yes(seed, checked))
    }

    /// Euclidean projection onto the cone, certified by a KKT check.
    pub fn project(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.nvars, z.len())?;
        if self.generators.is_empty() {
            return Ok(vec![0.0; self.nvars]);
        }
        if self.is_orthant() {
            return Ok(z.iter().map(|&v| v.max(0.0)).collect());
        }
        let zv = DVector::from_column_slice(z);
        let sol = nnls(&self.columns, &zv)?;
        let x = &self.columns * DVector::from_vec(sol.coefficients);
        let r = &zv - &x;
        let gen_norm = self.columns.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        let scale = zv.norm().max(1.0) * gen_norm.max(1.0);
        let dual = self.columns.transpose() * &r;
        let worst = dual.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let complementarity = x.dot(&r).abs();
        if worst > DEFAULT_TOL * scale || complementarity > DEFAULT_TOL * scale * zv.norm().max(1.0) {
            return Err(Error::Projection(format!(
                "KKT check failed (dual {worst:.3e}, complementarity {complementarity:.3e})"
            )));
        }
        Ok(x.iter().copied().collect())
    }

    /// Drops generators lying (up to `tol`) in the cone of the others.
    pub fn prune_redundant(&self, tol: f64) -> Result<GeneratedCone> {
        let mut keep: Vec<Vec<Rational>> = self.generators.clone();
        let mut i = 0;
        while i < keep.len() {
            let others: Vec<Vec<Rational>> =
                keep.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
            if others.is_empty() {
                break;
            }
            let rest = GeneratedCone::new(self.nvars, others)?;
            let gi = rational::vec_to_f64(&keep[i]);
            if rest.contains_f64(&gi, tol)? {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        GeneratedCone::new(self.nvars, keep)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("cone serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        crate::error::parse_json("cone JSON", s)
    }
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    nvars: usize,
    #[serde(with = "rational::serde_rational_rows")]
    generators: Vec<Vec<Rational>>,
}

impl TryFrom<ConeJson> for GeneratedCone {
    type Error = Error;
    fn try_from(j: ConeJson) -> Result<Self> {
        if let Some(k) = j.generators.iter().position(|g| g.len() != j.nvars) {
            return Err(Error::InvalidInput(format!("generators[{k}] must have {} entries", j.nvars)));
        }
        GeneratedCone::new(j.nvars, j.generators)
    }
}

impl From<GeneratedCone> for ConeJson {
    fn from(c: GeneratedCone) -> Self {
        ConeJson { nvars: c.nvars, generators: c.generators }
    }
}

/// A closed cone given by a membership predicate.
pub trait ConeRegion {
    fn dim(&self) -> usize;
    fn contains_point(&self, x: &[Rational]) -> bool;
}

impl ConeRegion for GeneratedCone {
    fn dim(&self) -> usize {
        self.nvars
    }

    fn contains_point(&self, x: &[Rational]) -> bool {
        self.contains_f64(&rational::vec_to_f64(x), DEFAULT_TOL).unwrap_or(false)
    }
}

/// Intersection of two regions.
pub struct Intersection<'a, A: ?Sized, B: ?Sized>(pub &'a A, pub &'a B);

impl<A: ConeRegion + ?Sized, B: ConeRegion + ?Sized> ConeRegion for Intersection<'_, A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn contains_point(&self, x: &[Rational]) -> bool {
        self.0.contains_point(x) && self.1.contains_point(x)
    }
}

/// Polyhedral inner approximation of a closed convex region.
#[derive(Clone, Debug, Serialize)]
pub struct InnerApproximation {
    pub cone: GeneratedCone,
    /// Accepted rays before redundancy pruning.
    pub rays_kept: usize,
    pub attempts: usize,
    pub seed: u64,
}

/// Samples unit directions, keeps those inside `region` (rounded to the
/// grid `1/4096`), and returns the cone they generate with redundant rays
/// pruned. Only an inner approximation when `region` is convex.
pub fn inner_approximation<R: ConeRegion + ?Sized>(
    region: &R,
    rays: usize,
    seed: u64,
) -> Result<InnerApproximation> {
    let n = region.dim();
    let mut rng = sampling::rng(seed);
    let max_attempts = 1000 * rays.max(1);
    let mut kept = Vec::with_capacity(rays);
    let mut attempts = 0;
    while kept.len() < rays && attempts < max_attempts {
        attempts += 1;
        let u = sampling::unit_vector(&mut rng, n);
        let r: Vec<Rational> = u.iter().map(|&v| rational::round_to_denominator(v, 4096)).collect();
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        if region.contains_point(&r) {
            kept.push(r);
        }
    }
    let rays_kept = kept.len();
    let cone = GeneratedCone::new(n, kept)?;
    if cone.rank() < n {
        return Err(Error::NotFullDimensional);
    }
    let cone = cone.prune_redundant(DEFAULT_TOL)?;
    Ok(InnerApproximation { cone, rays_kept, attempts, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vec_of};
    use crate::Status;
    use proptest::prelude::*;

    fn wedge() -> GeneratedCone {
        GeneratedCone::from_int_generators(2, &[&[1, 0], &[1, 1]]).unwrap()
    }

    #[test]
    fn contains_examples() {
        let k = GeneratedCone::orthant(2);
        assert!(k.contains(&vec_of(&[1, 2]), ContainsMode::Exact).unwrap());
        assert!(!k.contains(&vec_of(&[-1, 0]), ContainsMode::Exact).unwrap());
        assert!(!wedge().contains(&vec_of(&[0, 1]), ContainsMode::Exact).unwrap());
        assert!(!wedge().contains(&vec_of(&[0, 1]), ContainsMode::Tolerance(1e-9)).unwrap());
        assert!(wedge().contains(&vec_of(&[3, 1]), ContainsMode::Tolerance(1e-9)).unwrap());
        assert!(k.contains(&vec_of(&[1]), ContainsMode::Exact).is_err());
    }

    #[test]
    fn interior_sample_examples() {
        let k = GeneratedCone::orthant(3);
        let x = k.interior_sample(11).unwrap();
        assert!(x.iter().all(|v| v.is_positive()));
        assert_eq!(x, k.interior_sample(11).unwrap());
        let line = GeneratedCone::from_int_generators(2, &[&[1, 0], &[-1, 0]]).unwrap();
        assert_eq!(line.interior_sample(0), Err(Error::NotFullDimensional));
    }

    #[test]
    fn properness_examples() {
        let flags = GeneratedCone::orthant(2).properness();
        assert!(flags.pointed && flags.full_dimensional && flags.proper());
        let line = GeneratedCone::from_int_generators(2, &[&[1, 0], &[-1, 0]]).unwrap();
        assert!(!line.properness().pointed);
        let flat = GeneratedCone::from_int_generators(3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert!(!flat.properness().full_dimensional);
        assert!(flat.properness().pointed);
    }

    #[test]
    fn dual_examples() {
        let k = GeneratedCone::orthant(2);
        assert!(k.dual_contains(&vec_of(&[1, 1])).unwrap());
        assert!(!k.dual_contains(&vec_of(&[1, -1])).unwrap());
        let ray = GeneratedCone::from_int_generators(2, &[&[1, 1]]).unwrap();
        assert!(ray.dual_contains(&vec_of(&[1, -1])).unwrap());
    }

    #[test]
    fn acuteness_examples() {
        let k = GeneratedCone::orthant(2);
        assert!(k.acute_wrt(&SymMatrix::identity(2), 0).unwrap().is_yes());
        let c = k.acute_wrt(&SymMatrix::from_int_rows(&[&[1, -1], &[-1, 1]]).unwrap(), 0).unwrap();
        assert_eq!(c.status, Status::CertifiedNo);
        assert_eq!(c.witness, Some(Witness::GeneratorPair { i: 0, j: 1, value: int(-1) }));
        let swap = SymMatrix::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(k.acute_wrt(&swap, 0).unwrap().is_yes());
    }

    #[test]
    fn projection_examples() {
        let k = GeneratedCone::orthant(2);
        assert_eq!(k.project(&[1.0, -2.0]).unwrap(), vec![1.0, 0.0]);
        let p = wedge().project(&[0.0, 1.0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let inside = wedge().project(&[3.0, 1.0]).unwrap();
        assert!((inside[0] - 3.0).abs() < 1e-12 && (inside[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kkt_oracle_for_wedge_projection() {
        // Independent check: (1/2,1/2) is in K and z - p is orthogonal to the
        // active ray (1,1) and has nonpositive pairing with (1,0).
        let p = [0.5, 0.5];
        let r = [0.0 - p[0], 1.0 - p[1]];
        assert_eq!(r[0] * 1.0 + r[1] * 1.0, 0.0);
        assert!(r[0] * 1.0 + r[1] * 0.0 <= 0.0);
        assert!(wedge().contains(&[frac(1, 2), frac(1, 2)], ContainsMode::Exact).unwrap());
    }

    #[test]
    fn deduplicates_positive_multiples_and_rejects_zero() {
        let k = GeneratedCone::from_int_generators(2, &[&[1, 2], &[2, 4], &[1, 0]]).unwrap();
        assert_eq!(k.generators().len(), 2);
        assert!(GeneratedCone::from_int_generators(2, &[&[0, 0]]).is_err());
        let opposite = GeneratedCone::from_int_generators(2, &[&[1, 2], &[-1, -2]]).unwrap();
        assert_eq!(opposite.generators().len(), 2);
    }

    #[test]
    fn interior_membership() {
        let k = GeneratedCone::orthant(2);
        assert!(k.contains_interior(&vec_of(&[1, 1])).unwrap());
        assert!(!k.contains_interior(&vec_of(&[1, 0])).unwrap());
        assert!(!k.contains_interior(&vec_of(&[-1, 1])).unwrap());
    }

    #[test]
    fn pruning_keeps_the_extreme_rays() {
        let k = GeneratedCone::from_int_generators(2, &[&[1, 0], &[1, 1], &[0, 1], &[2, 1]]).unwrap();
        let p = k.prune_redundant(1e-9).unwrap();
        assert_eq!(p.generators().len(), 2);
        assert!(p.contains(&vec_of(&[1, 1]), ContainsMode::Exact).unwrap());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let s = wedge().to_json_string();
        assert_eq!(s, r#"{"nvars":2,"generators":[["1/1","0/1"],["1/1","1/1"]]}"#);
        assert_eq!(GeneratedCone::from_json_str(&s).unwrap(), wedge());
        let err = GeneratedCone::from_json_str(r#"{"nvars":2,"generators":[[1,0],[1]]}"#).unwrap_err();
        assert!(err.to_string().contains("generators[1]"), "{err}");
    }

    fn polyhedral_cone() -> impl Strategy<Value = GeneratedCone> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 3..=5).prop_filter_map(
            "needs a proper cone",
            |gens| {
                let rows: Vec<Vec<Rational>> = gens.iter().map(|g| vec_of(g)).collect();
                let k = GeneratedCone::new(3, rows).ok()?;
                k.properness().proper().then_some(k)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn projection_is_feasible_idempotent_and_nonexpansive(
            k in polyhedral_cone(),
            z1 in proptest::collection::vec(-5.0f64..5.0, 3),
            z2 in proptest::collection::vec(-5.0f64..5.0, 3),
        ) {
            let p1 = k.project(&z1).unwrap();
            let p2 = k.project(&z2).unwrap();
            prop_assert!(k.contains_f64(&p1, 1e-8).unwrap());
            let again = k.project(&p1).unwrap();
            let drift: f64 = again.iter().zip(&p1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(drift < 1e-8);
            let dp = crate::linalg::norm(&p1.iter().zip(&p2).map(|(a, b)| a - b).collect::<Vec<_>>());
            let dz = crate::linalg::norm(&z1.iter().zip(&z2).map(|(a, b)| a - b).collect::<Vec<_>>());
            prop_assert!(dp <= dz + 1e-8);
        }

        #[test]
        fn pointed_cones_exclude_negated_members(k in polyhedral_cone(), lambdas in proptest::collection::vec(0i64..4, 5)) {
            let mut x = vec![Rational::zero(); 3];
            for (g, l) in k.generators().iter().zip(&lambdas) {
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi += gi * int(*l);
                }
            }
            prop_assume!(x.iter().any(|v| !v.is_zero()));
            prop_assert!(k.contains(&x, ContainsMode::Exact).unwrap());
            let neg: Vec<Rational> = x.iter().map(|v| -v).collect();
            prop_assert!(!k.contains(&neg, ContainsMode::Exact).unwrap());
        }
    }
}
