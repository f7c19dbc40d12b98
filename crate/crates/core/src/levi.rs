//! Linear evolution variational inequalities `ẋ + A x + F(x) ∈ −N_K(x)` on
//! generated cones: projected Euler simulation and stability certificates.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Status, Witness};
use crate::cones::{ContainsMode, GeneratedCone};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{norm, Matrix, SymMatrix};
use crate::lorentz::quadratic_lorentzian;
use crate::poly::Polynomial;
use crate::rational;
use crate::sampling;

/// Sample budget used where an operation takes no explicit count.
pub const DEFAULT_SAMPLES: u64 = 1000;
/// States may leave the cone by at most this much (relative).
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct LeviSystem {
    a: Matrix,
    a_f64: DMatrix<f64>,
    f: Option<Vec<Polynomial>>,
    cone: GeneratedCone,
}

impl LeviSystem {
    pub fn new(a: Matrix, f: Option<Vec<Polynomial>>, cone: GeneratedCone) -> Result<Self> {
        let n = cone.nvars();
        if a.rows() != n || a.cols() != n {
            return Err(Error::InvalidInput(format!("A must be {n}x{n} to match the cone, got {}x{}", a.rows(), a.cols())));
        }
        if let Some(fs) = &f {
            check_dim(n, fs.len())?;
            for (i, p) in fs.iter().enumerate() {
                if p.nvars() != n {
                    return Err(Error::InvalidInput(format!("F[{i}] has {} variables, expected {n}", p.nvars())));
                }
            }
        }
        let a_f64 = a.to_f64();
        Ok(LeviSystem { a, a_f64, f, cone })
    }

    pub fn linear(a: Matrix, cone: GeneratedCone) -> Result<Self> {
        Self::new(a, None, cone)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn cone(&self) -> &GeneratedCone {
        &self.cone
    }

    pub fn nonlinearity(&self) -> Option<&[Polynomial]> {
        self.f.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.cone.nvars()
    }

    /// `A x + F(x)`.
    pub fn field(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut y: Vec<f64> = (&self.a_f64 * DVector::from_column_slice(x)).iter().copied().collect();
        if let Some(fs) = &self.f {
            for (yi, p) in y.iter_mut().zip(fs) {
                *yi += p.eval_f64(x)?;
            }
        }
        Ok(y)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: LeviSystemJson = crate::error::parse_json("system JSON", s)?;
        Self::new(j.a, j.f, j.cone)
    }

    pub fn to_json_string(&self) -> String {
        let j = LeviSystemJson { a: self.a.clone(), f: self.f.clone(), cone: self.cone.clone() };
        serde_json::to_string(&j).expect("system serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeviSystemJson {
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    f: Option<Vec<Polynomial>>,
    cone: GeneratedCone,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub h: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectories hold at least the initial state")
    }

    pub fn norms(&self) -> Vec<f64> {
        self.states.iter().map(|x| norm(x)).collect()
    }

    /// `t,x1,…,xn` header and one row per state.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            out.push_str(&t.to_string());
            for v in x {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// One projected Euler step `Proj_K(x − h (A x + F(x)))`.
pub fn step(sys: &LeviSystem, x: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::Precondition("step size must be positive".into()));
    }
    let v = sys.field(x)?;
    let z: Vec<f64> = x.iter().zip(&v).map(|(xi, vi)| xi - h * vi).collect();
    sys.cone.project(&z)
}

/// Iterates [`step`] for `round(t_end / h)` steps from `x0 ∈ K`.
pub fn simulate(sys: &LeviSystem, x0: &[f64], h: f64, t_end: f64) -> Result<Trajectory> {
    check_dim(sys.dim(), x0.len())?;
    if !(h > 0.0) || !(t_end > 0.0) {
        return Err(Error::Precondition("h and T must be positive".into()));
    }
    if !sys.cone.contains_f64(x0, FEASIBILITY_TOL)? {
        return Err(Error::Precondition("initial state is not in the cone".into()));
    }
    let steps = (t_end / h).round() as usize;
    if steps == 0 {
        return Err(Error::Precondition("T must be at least one step".into()));
    }
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());
    let mut x = x0.to_vec();
    for k in 1..=steps {
        x = step(sys, &x, h)?;
        times.push(k as f64 * h);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states, h })
}

/// Copositivity of `Q` on `K`. Positive semidefiniteness (exact inertia)
/// or acuteness certify it; a generator or sampled point with
/// `xᵀQx < 0` refutes it.
pub fn copositivity(q: &SymMatrix, k: &GeneratedCone, samples: u64, seed: u64) -> Result<Certificate> {
    check_dim(k.nvars(), q.dim())?;
    if q.inertia().n_minus == 0 {
        return Ok(Certificate::yes(seed, 0).with_detail("positive semidefinite"));
    }
    let acute = k.acute_wrt(q, seed)?;
    if acute.is_yes() {
        return Ok(Certificate::yes(seed, acute.samples_used).with_detail("acute on generators"));
    }
    let mut used = 0;
    for g in k.generators() {
        used += 1;
        let value = q.quadratic(g)?;
        if value.is_negative() {
            return Ok(Certificate::no(Witness::Vector { x: g.clone(), value }, seed, used));
        }
    }
    if k.rank() == k.nvars() {
        let mut rng = sampling::rng(seed);
        for _ in 0..samples {
            used += 1;
            let x = k.interior_sample_with(&mut rng);
            let value = q.quadratic(&x)?;
            if value.is_negative() {
                return Ok(Certificate::no(Witness::Vector { x, value }, seed, used));
            }
        }
    }
    Ok(Certificate::unknown(seed, used))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    StableEvidence,
    AsymptoticEvidence,
    UnstableWitness,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub quadratic_lorentzian: Certificate,
    pub copositivity: Certificate,
    /// Conclusions reached, in order.
    pub chain: Vec<String>,
    /// `xᵀQx > 0` on every generator, so the copositivity is strict.
    pub strict: bool,
    pub verdict: Verdict,
}

/// Follows Lorentzian ⇒ copositive ⇒ Lyapunov semi-stable with `P = I/2`
/// ⇒ stable on `K`, falling back to a direct copositivity check.
pub fn quadratic_lorentzian_implies_stable(q: &SymMatrix, k: &GeneratedCone, seed: u64) -> Result<ChainReport> {
    let ql = quadratic_lorentzian(q, k, seed)?;
    let cop = copositivity(q, k, DEFAULT_SAMPLES, seed)?;
    let mut strict = false;
    let mut chain = Vec::new();
    if ql.is_yes() {
        chain.push("quadratic form is Lorentzian on K".to_string());
        chain.push("copositive on K".to_string());
        chain.push("Lyapunov semi-stable on K with P = I/2".to_string());
        chain.push("stable with respect to K".to_string());
        strict = k.generators().iter().map(|g| q.quadratic(g)).collect::<Result<Vec<_>>>()?.iter().all(Signed::is_positive);
        if strict {
            chain.push("strictly copositive, so asymptotically stable with respect to K".to_string());
        }
    } else if cop.is_yes() {
        chain.push("copositive on K (Lorentzian chain not applicable)".to_string());
        chain.push("Lyapunov semi-stable on K with P = I/2".to_string());
        chain.push("stable with respect to K".to_string());
    }
    let verdict = if ql.is_yes() || cop.is_yes() { Verdict::StableEvidence } else { Verdict::Inconclusive };
    Ok(ChainReport { quadratic_lorentzian: ql, copositivity: cop, chain, strict, verdict })
}

fn condition(name: &str, cert: Certificate) -> Certificate {
    let Certificate { witness, samples_used, seed, .. } = cert;
    let detail = Box::new(witness.unwrap_or(Witness::Infeasible { reason: name.to_string() }));
    Certificate::no(Witness::Condition { condition: name.to_string(), detail }, seed, samples_used)
}

/// Lyapunov semi-stability of `A` on `K` with matrix `P`:
/// (a) `xᵀPx ≥ c‖x‖²` with `c > 0` on `K`, (b) `(P + Pᵀ) A` copositive on
/// `K`, (c) `(I − (P + Pᵀ)) u ∈ K` for every generator.
pub fn lyapunov_semistability_check(a: &Matrix, p: &SymMatrix, k: &GeneratedCone, samples: u64, seed: u64) -> Result<Certificate> {
    let n = k.nvars();
    check_dim(n, p.dim())?;
    check_dim(n, a.rows())?;
    let mut used = 0;

    let a_status = if p.inertia().n_plus == n {
        Status::CertifiedYes
    } else {
        let mut found = None;
        for g in k.generators() {
            used += 1;
            let value = p.quadratic(g)?;
            if !value.is_positive() {
                found = Some(Witness::Vector { x: g.clone(), value });
                break;
            }
        }
        if found.is_none() && k.rank() == n {
            let mut rng = sampling::rng(seed);
            for _ in 0..samples {
                used += 1;
                let x = k.interior_sample_with(&mut rng);
                let value = p.quadratic(&x)?;
                if !value.is_positive() {
                    found = Some(Witness::Vector { x, value });
                    break;
                }
            }
        }
        if let Some(w) = found {
            return Ok(condition("a", Certificate::no(w, seed, used)));
        }
        Status::Unknown
    };

    let two_p = p.as_matrix().scale(&rational::int(2));
    let b_matrix = two_p.mul(a)?.symmetric_part()?;
    let b = copositivity(&b_matrix, k, samples, seed)?;
    used += b.samples_used;
    if b.is_no() {
        return Ok(condition("b", Certificate { samples_used: used, ..b }));
    }

    let mut c_map = Matrix::identity(n).to_rows();
    for (i, row) in c_map.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v -= two_p.get(i, j);
        }
    }
    let c_map = Matrix::from_rows(&c_map)?;
    for g in k.generators() {
        used += 1;
        let image = c_map.mul_vec(g)?;
        if !k.contains(&image, ContainsMode::Exact)? {
            return Ok(condition("c", Certificate::no(Witness::Point { x: g.clone() }, seed, used)));
        }
    }

    let detail = format!("a: {:?}, b: {:?}, c: CertifiedYes", a_status, b.status);
    Ok(if a_status == Status::CertifiedYes && b.is_yes() {
        Certificate::yes(seed, used).with_detail(detail)
    } else {
        Certificate::unknown(seed, used).with_detail(detail)
    })
}

/// Sampled check of the Lyapunov conditions for `V(x) = xᵀPx` on
/// `{x ∈ K : ‖x‖ ≤ σ}`: positivity (with the fitted `c` in `V ≥ c‖x‖²`),
/// `x − ∇V(x) ∈ K` on boundary rays, and
/// `⟨A x + F(x), ∇V(x)⟩ ≥ λ V(x)`.
pub fn lyapunov_condition_check(sys: &LeviSystem, p: &SymMatrix, sigma: f64, lambda: f64, samples: u64, seed: u64) -> Result<Certificate> {
    let n = sys.dim();
    check_dim(n, p.dim())?;
    if !(sigma > 0.0) || !(lambda >= 0.0) {
        return Err(Error::Precondition("need sigma > 0 and lambda >= 0".into()));
    }
    let k = sys.cone();
    let pf = p.to_f64();
    let scale = rational::to_f64(&p.max_abs()).max(1.0);
    let mut rng = sampling::rng(seed);
    let gens = k.generators_f64();
    let full = k.rank() == n;
    let mut c_fit = f64::INFINITY;
    let mut used = 0;
    let total = samples.max(gens.len() as u64);
    for s in 0..total {
        let on_boundary = (s as usize) < gens.len();
        let dir = if on_boundary {
            gens[s as usize].clone()
        } else if full {
            rational::vec_to_f64(&k.interior_sample_with(&mut rng))
        } else {
            continue;
        };
        let r = sigma * sampling::uniform(&mut rng, 1e-3, 1.0);
        let len = norm(&dir);
        let x: Vec<f64> = dir.iter().map(|v| v * r / len).collect();
        used += 1;
        let xv = DVector::from_column_slice(&x);
        let px = &pf * &xv;
        let v = xv.dot(&px);
        let grad: Vec<f64> = px.iter().map(|g| 2.0 * g).collect();
        let nx2 = r * r;
        if !(v > 0.0) {
            return Ok(condition("positivity", Certificate::no(Witness::FloatPoint { x, value: v }, seed, used)));
        }
        c_fit = c_fit.min(v / nx2);
        if on_boundary {
            let z: Vec<f64> = x.iter().zip(&grad).map(|(a, b)| a - b).collect();
            let proj = k.project(&z)?;
            let gap = norm(&z.iter().zip(&proj).map(|(a, b)| a - b).collect::<Vec<_>>());
            if gap > 1e-9 * scale * r.max(1.0) {
                return Ok(condition("boundary", Certificate::no(Witness::FloatPoint { x, value: gap }, seed, used)));
            }
        }
        let field = sys.field(&x)?;
        let lhs: f64 = field.iter().zip(&grad).map(|(a, b)| a * b).sum();
        let margin = lhs - lambda * v;
        if margin < -1e-9 * scale * nx2.max(1e-300) {
            return Ok(condition("decrease", Certificate::no(Witness::FloatPoint { x, value: margin }, seed, used)));
        }
    }
    Ok(Certificate::unknown(seed, used).with_detail(format!("V(0) = 0; c = {c_fit:.6e}, tau = 2")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartSummary {
    pub x0: Vec<f64>,
    pub final_norm_ratio: f64,
    pub max_norm: f64,
    /// First index after which `‖x_k‖` never increases.
    pub monotone_after: usize,
    /// `‖x_h(T) − x_{h/2}(T)‖`.
    pub halved_step_difference: f64,
    pub halved_step_agrees: bool,
    pub diverged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Empirical {
    pub max_norm: f64,
    pub final_norm_ratio: f64,
    pub monotone_after: usize,
    pub starts: Vec<StartSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub copositivity: Certificate,
    pub lyapunov: Certificate,
    pub empirical: Empirical,
    pub verdict: Verdict,
    pub h: f64,
    pub t_end: f64,
    pub cone_generators: usize,
}

/// Ratio at or below which a start counts as converged.
pub const ASYMPTOTIC_RATIO: f64 = 1e-4;
/// Growth factor that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e3;
/// Allowed relative disagreement between the `h` and `h/2` runs.
pub const HALVED_STEP_TOL: f64 = 0.1;

fn run_start(sys: &LeviSystem, x0: &[f64], h: f64, t_end: f64) -> Result<StartSummary> {
    let coarse = simulate(sys, x0, h, t_end)?;
    let fine = simulate(sys, x0, h / 2.0, t_end)?;
    let n0 = norm(x0);
    let norms = coarse.norms();
    let last = *norms.last().expect("nonempty");
    let max_norm = norms.iter().chain(fine.norms().iter()).copied().fold(0.0, f64::max);
    let slack = 1e-9 * n0.max(f64::MIN_POSITIVE);
    let monotone_after = (1..norms.len()).rev().find(|&i| norms[i] > norms[i - 1] + slack).unwrap_or(0);
    let xf = fine.final_state();
    let diff = norm(&coarse.final_state().iter().zip(xf).map(|(a, b)| a - b).collect::<Vec<_>>());
    Ok(StartSummary {
        x0: x0.to_vec(),
        final_norm_ratio: if n0 > 0.0 { last / n0 } else { 0.0 },
        max_norm,
        monotone_after,
        halved_step_difference: diff,
        halved_step_agrees: diff <= HALVED_STEP_TOL * norm(xf).max(1e-12 * n0),
        diverged: max_norm > DIVERGENCE_FACTOR * n0,
    })
}

/// Simulates every start with steps `h` and `h/2` and combines the runs
/// with the copositivity and `P = I/2` Lyapunov certificates.
pub fn stability_experiment(sys: &LeviSystem, x0s: &[Vec<f64>], h: f64, t_end: f64, samples: u64, seed: u64) -> Result<StabilityReport> {
    if x0s.is_empty() {
        return Err(Error::Precondition("at least one start is required".into()));
    }
    let k = sys.cone();
    let sym_a = sys.matrix().symmetric_part()?;
    let cop = copositivity(&sym_a, k, samples, seed)?;
    let half = SymMatrix::identity(k.nvars()).scale(&rational::frac(1, 2));
    let lyap = lyapunov_semistability_check(sys.matrix(), &half, k, samples, seed)?;

    let starts = std::thread::scope(|scope| {
        let handles: Vec<_> = x0s.iter().map(|x0| scope.spawn(move || run_start(sys, x0, h, t_end))).collect();
        handles.into_iter().map(|t| t.join().expect("trajectory worker panicked")).collect::<Result<Vec<_>>>()
    })?;

    let verdict = if starts.iter().any(|s| s.diverged) {
        Verdict::UnstableWitness
    } else if starts.iter().all(|s| s.final_norm_ratio <= ASYMPTOTIC_RATIO && s.halved_step_agrees) {
        Verdict::AsymptoticEvidence
    } else if starts.iter().all(|s| s.final_norm_ratio <= 1.0) {
        Verdict::StableEvidence
    } else {
        Verdict::Inconclusive
    };
    let empirical = Empirical {
        max_norm: starts.iter().map(|s| s.max_norm).fold(0.0, f64::max),
        final_norm_ratio: starts.iter().map(|s| s.final_norm_ratio).fold(0.0, f64::max),
        monotone_after: starts.iter().map(|s| s.monotone_after).max().unwrap_or(0),
        starts,
    };
    Ok(StabilityReport {
        copositivity: cop,
        lyapunov: lyap,
        empirical,
        verdict,
        h,
        t_end,
        cone_generators: k.generators().len(),
    })
}

/// Start points for experiments: the generators (at most eight, evenly
/// spaced when there are more) and the sum of all generators.
pub fn standard_starts(k: &GeneratedCone) -> Vec<Vec<f64>> {
    let gens = k.generators_f64();
    let m = gens.len();
    let mut out: Vec<Vec<f64>> = if m <= 8 { gens.clone() } else { (0..8).map(|i| gens[i * m / 8].clone()).collect() };
    let mut sum = vec![0.0; k.nvars()];
    for g in &gens {
        for (s, v) in sum.iter_mut().zip(g) {
            *s += v;
        }
    }
    if sum.iter().any(|v| !v.is_zero()) {
        out.push(sum);
    }
    out
}
