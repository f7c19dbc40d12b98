//! Certificates for cone-Lorentzian structure of multivariate forms.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] and [`realroots`] do exact rational polynomial algebra,
//! * [`linalg`], [`lp`] and [`nnls`] hold the small dense solvers the
//!   certifiers need (exact LDL inertia, exact simplex feasibility,
//!   floating nonnegative least squares),
//! * [`cones`] implements finitely generated cones,
//! * [`lorentz`], [`semipositive`], [`gibbs`] and [`levi`] are the
//!   certifiers and simulators,
//! * [`cli`] is the command-line front end used by the `klorentz` binary.
//!
//! Properties that quantify over a cone interior are only semi-decidable;
//! such checks return a [`Certificate`] whose `Unknown` status carries the
//! sample budget that was spent without finding a violation.

pub mod certificate;
pub mod cli;
pub mod cones;
pub mod error;
pub mod gibbs;
pub mod levi;
pub mod linalg;
pub mod lorentz;
pub mod lp;
pub mod nnls;
pub mod poly;
pub mod rational;
pub mod realroots;
pub mod sampling;
pub mod semipositive;

pub use certificate::{Certificate, Status, Witness};
pub use cones::GeneratedCone;
pub use error::{Error, Result};
pub use linalg::{Inertia, Matrix, SymMatrix};
pub use poly::Polynomial;
pub use rational::Rational;
pub use realroots::UniPoly;

/// Version string embedded in every CLI report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
