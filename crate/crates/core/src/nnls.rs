//! Lawson–Hanson active-set nonnegative least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct NnlsSolution {
    pub coefficients: Vec<f64>,
    /// `‖G λ − z‖₂`.
    pub residual: f64,
}

/// Minimizes `‖G λ − z‖₂` subject to `λ ≥ 0`. Columns of `g` are the
/// generators.
pub fn nnls(g: &DMatrix<f64>, z: &DVector<f64>) -> Result<NnlsSolution> {
    let (rows, cols) = g.shape();
    if rows != z.len() {
        return Err(Error::DimensionMismatch { expected: rows, got: z.len() });
    }
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0) * z.norm().max(1.0);
    let tol = 1e-12 * scale;
    let mut x = DVector::<f64>::zeros(cols);
    let mut passive = vec![false; cols];
    let max_outer = 3 * cols + 30;

    let mut outer = 0;
    loop {
        let w = g.transpose() * (z - g * &x);
        let candidate = (0..cols)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = candidate else {
            break;
        };
        outer += 1;
        if outer > max_outer {
            return Err(Error::Projection(format!("NNLS did not converge after {max_outer} iterations")));
        }
        passive[j] = true;

        for _ in 0..=cols {
            let s = passive_least_squares(g, z, &passive);
            let blocking: Vec<usize> = (0..cols).filter(|&i| passive[i] && s[i] <= 0.0).collect();
            if blocking.is_empty() {
                x = s;
                break;
            }
            let alpha = blocking
                .iter()
                .map(|&i| x[i] / (x[i] - s[i]))
                .fold(f64::INFINITY, f64::min);
            x += alpha * (&s - &x);
            for i in 0..cols {
                if passive[i] && x[i] <= tol * 1e-3 {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    let residual = (g * &x - z).norm();
    Ok(NnlsSolution { coefficients: x.iter().copied().collect(), residual })
}

fn passive_least_squares(g: &DMatrix<f64>, z: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let idx: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let sub = g.select_columns(&idx);
    let svd = sub.svd(true, true);
    let sol = svd
        .solve(z, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(idx.len()));
    let mut s = DVector::zeros(passive.len());
    for (k, &i) in idx.iter().enumerate() {
        s[i] = sol[k];
    }
    s
}
