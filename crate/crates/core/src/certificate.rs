//! Tri-state verdicts for semi-decidable properties.

use serde::Serialize;

use crate::linalg::Inertia;
use crate::rational::{serde_rational, serde_rational_rows, serde_rational_vec, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    Unknown,
}

/// Evidence attached to a `CertifiedNo`. Every witness can be re-checked
/// independently of the search that found it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A point at which the tested property fails.
    Point {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
    },
    /// A floating-point state (simulation or tolerance checks).
    FloatPoint { x: Vec<f64>, value: f64 },
    /// Generators `u_i, u_j` with `u_iᵀ Q u_j = value < 0`.
    GeneratorPair {
        i: usize,
        j: usize,
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    /// Points `x, y` with `yᵀ Q x = value`.
    PointPair {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        y: Vec<Rational>,
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    /// A single vector with negative quadratic value.
    Vector {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    /// Wrong number of positive eigenvalues.
    Inertia { inertia: Inertia },
    /// A derivative direction tuple and the failure of the resulting form.
    DirectionTuple {
        #[serde(with = "serde_rational_rows")]
        directions: Vec<Vec<Rational>>,
        cause: Box<Witness>,
    },
    /// `M_g(x)` has a negative eigenvalue for `g = D_{a_1}…D_{a_m} f`.
    LogConcavity {
        #[serde(with = "serde_rational_rows")]
        directions: Vec<Vec<Rational>>,
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        min_eigenvalue: f64,
    },
    /// `g(x) <= 0` for `g = D_{a_1}…D_{a_m} f` at an interior point.
    NonPositive {
        #[serde(with = "serde_rational_rows")]
        directions: Vec<Vec<Rational>>,
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    /// `Δ_ij Z(w) < 0`.
    Rayleigh {
        #[serde(with = "serde_rational_vec")]
        w: Vec<Rational>,
        i: usize,
        j: usize,
        #[serde(with = "serde_rational")]
        value: Rational,
        #[serde(skip_serializing_if = "Option::is_none")]
        inclusion: Option<InclusionProbabilities>,
    },
    /// Two members of a cone whose midpoint is outside.
    Midpoint {
        #[serde(with = "serde_rational_vec")]
        a: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        b: Vec<Rational>,
    },
    /// Failure of a named sub-condition.
    Condition { condition: String, detail: Box<Witness> },
    /// Exact infeasibility; nothing further to point at.
    Infeasible { reason: String },
}

/// `P(i,j ∈ S)` against `P(i ∈ S) P(j ∈ S)` for multi-affine partition functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionProbabilities {
    #[serde(with = "serde_rational")]
    pub joint: Rational,
    #[serde(with = "serde_rational")]
    pub marginal_i: Rational,
    #[serde(with = "serde_rational")]
    pub marginal_j: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub status: Status,
    pub witness: Option<Witness>,
    pub samples_used: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Certificate {
    pub fn yes(seed: u64, samples_used: u64) -> Self {
        Certificate { status: Status::CertifiedYes, witness: None, samples_used, seed, detail: None }
    }

    pub fn no(witness: Witness, seed: u64, samples_used: u64) -> Self {
        Certificate { status: Status::CertifiedNo, witness: Some(witness), samples_used, seed, detail: None }
    }

    pub fn unknown(seed: u64, samples_used: u64) -> Self {
        Certificate { status: Status::Unknown, witness: None, samples_used, seed, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::CertifiedYes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::CertifiedNo
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }
}
