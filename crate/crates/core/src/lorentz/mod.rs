//! Cone-Lorentzian certification, derivative-tower cones and Rayleigh
//! differences.

mod certify;
mod rayleigh;
mod tower;

pub use crate::linalg::{inertia, Inertia};
pub use certify::{
    clc_check, hyperbolicity_check, k_lorentzian_check, quadratic_lorentzian, ulc_bivariate,
};
pub use rayleigh::{
    delta_ij, log_hessian_identity_check, rayleigh_cross, rayleigh_cross_poly, rayleigh_diagonal,
    rayleigh_matrix,
};
pub use tower::{
    boundary_classify, connectivity_witness, convexity_falsifier, inclusion_check, inclusion_witness,
    tower_membership, BoundaryEntry, BoundaryVerdict, ConeTower, MembershipClass,
};
