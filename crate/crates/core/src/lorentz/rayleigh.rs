use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::SymMatrix;
use crate::poly::Polynomial;
use crate::rational::Rational;

/// `M_f(x) = ∇f(x) ∇f(x)ᵀ − f(x) ∇²f(x)`.
pub fn rayleigh_matrix(f: &Polynomial, x: &[Rational]) -> Result<SymMatrix> {
    check_dim(f.nvars(), x.len())?;
    let fx = f.eval(x)?;
    let g = f.gradient(x)?;
    let h = f.hessian(x)?;
    SymMatrix::outer(&g).sub(&h.scale(&fx))
}

/// `(D_u f)(x)² − f(x) (D_u² f)(x)`, through symbolic directional derivatives.
pub fn rayleigh_diagonal(f: &Polynomial, x: &[Rational], u: &[Rational]) -> Result<Rational> {
    rayleigh_cross(f, x, u, u)
}

/// `D_v f(x) D_w f(x) − f(x) D_v D_w f(x)`.
pub fn rayleigh_cross(f: &Polynomial, x: &[Rational], v: &[Rational], w: &[Rational]) -> Result<Rational> {
    check_dim(f.nvars(), x.len())?;
    let dv = f.dir_derivative(v)?;
    let dw = f.dir_derivative(w)?;
    let dvw = dv.dir_derivative(w)?;
    Ok(dv.eval(x)? * dw.eval(x)? - f.eval(x)? * dvw.eval(x)?)
}

/// The polynomial `D_v f · D_w f − f · D_v D_w f`.
pub fn rayleigh_cross_poly(f: &Polynomial, v: &[Rational], w: &[Rational]) -> Result<Polynomial> {
    let dv = f.dir_derivative(v)?;
    let dw = f.dir_derivative(w)?;
    let dvw = dv.dir_derivative(w)?;
    Ok(&(&dv * &dw) - &(f * &dvw))
}

/// `Δ_ij f = ∂_i f ∂_j f − f ∂_i ∂_j f`.
pub fn delta_ij(f: &Polynomial, i: usize, j: usize) -> Result<Polynomial> {
    let n = f.nvars();
    if i >= n || j >= n {
        return Err(Error::InvalidInput(format!("index pair ({i},{j}) out of range for {n} variables")));
    }
    let di = f.partial(i);
    let dj = f.partial(j);
    let dij = di.partial(j);
    Ok(&(&di * &dj) - &(f * &dij))
}

/// Largest entry of `|M_f(x) + f(x)² ∇² log f(x)|`, with
/// `∇² log f = H/f − ∇f ∇fᵀ / f²` evaluated exactly. Always zero.
pub fn log_hessian_identity_check(f: &Polynomial, x: &[Rational]) -> Result<Rational> {
    check_dim(f.nvars(), x.len())?;
    let fx = f.eval(x)?;
    if !fx.is_positive() {
        return Err(Error::Precondition("log f needs f(x) > 0".into()));
    }
    let m = rayleigh_matrix(f, x)?;
    let g = f.gradient(x)?;
    let h = f.hessian(x)?;
    let n = f.nvars();
    let mut worst = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let log_h = h.get(i, j) / &fx - &g[i] * &g[j] / (&fx * &fx);
            let r = (m.get(i, j) + &fx * &fx * log_h).abs();
            if r > worst {
                worst = r;
            }
        }
    }
    Ok(worst)
}
