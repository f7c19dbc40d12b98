//! Small dense rational matrices, exact inertia, and floating eigenvalues.

use nalgebra::{Complex, DMatrix};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::rational::{self, Rational};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend(row.iter().cloned());
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| rational::vec_of(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.cols, x.len())?;
        Ok((0..self.rows).map(|i| rational::dot(self.row(i), x)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetric_part(&self) -> Result<SymMatrix> {
        if !self.is_square() {
            return Err(Error::InvalidInput("symmetric part of a non-square matrix".into()));
        }
        let half = rational::frac(1, 2);
        let mut s = SymMatrix::zeros(self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                s.set(i, j, (self.get(i, j) + self.get(j, i)) * &half);
            }
        }
        Ok(s)
    }

    /// Row echelon form by exact Gaussian elimination; returns the rank.
    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in rank + 1..r {
                if m[i][col].is_zero() {
                    continue;
                }
                let factor = &m[i][col] / &m[rank][col];
                for j in col..c {
                    let delta = &factor * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    /// Basis of `{x : M x = 0}` from the reduced row echelon form, one
    /// vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let mut m = self.to_rows();
        let (r, c) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let pv = m[row][col].clone();
            for v in m[row].iter_mut() {
                *v /= &pv;
            }
            for i in 0..r {
                if i == row || m[i][col].is_zero() {
                    continue;
                }
                let factor = m[i][col].clone();
                for j in col..c {
                    let delta = &factor * &m[row][j];
                    m[i][j] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (0..c)
            .filter(|j| !pivots.contains(j))
            .map(|free| {
                let mut x = vec![Rational::zero(); c];
                x[free] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -m[i][free].clone();
                }
                x
            })
            .collect()
    }

    /// Exact solution of `M x = b` for square nonsingular `M`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        if !self.is_square() {
            return Err(Error::InvalidInput("solve needs a square matrix".into()));
        }
        check_dim(self.rows, b.len())?;
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        gauss_jordan(&mut aug, n)?;
        Ok(aug.into_iter().map(|row| row[n].clone()).collect())
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::InvalidInput("inverse needs a square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        gauss_jordan(&mut aug, n)?;
        let rows: Vec<Vec<Rational>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant needs a square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det *= &m[col][col];
            for i in col + 1..n {
                let factor = &m[i][col] / &m[col][col];
                for j in col..n {
                    let delta = &factor * &m[col][j];
                    m[i][j] -= delta;
                }
            }
        }
        Ok(det)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| rational::to_f64(self.get(i, j)))
    }
}

fn gauss_jordan(aug: &mut [Vec<Rational>], n: usize) -> Result<()> {
    for col in 0..n {
        let p = (col..n).find(|&i| !aug[i][col].is_zero()).ok_or(Error::SingularMatrix)?;
        aug.swap(p, col);
        let pivot = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == col || aug[i][col].is_zero() {
                continue;
            }
            let factor = aug[i][col].clone();
            let width = aug[i].len();
            for j in 0..width {
                let delta = &factor * &aug[col][j];
                aug[i][j] -= delta;
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    #[serde(with = "rational::serde_rational_rows")]
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.rows.is_empty() {
            return Err(Error::InvalidInput("rows: matrix has no rows".into()));
        }
        let c = j.rows[0].len();
        if let Some(k) = j.rows.iter().position(|r| r.len() != c) {
            return Err(Error::InvalidInput(format!("rows[{k}]: expected {c} entries")));
        }
        Matrix::from_rows(&j.rows)
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson { rows: m.to_rows() }
    }
}

/// Symmetric rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut s = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            s.set(i, i, x.clone());
        }
        s
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        Self::try_from(Matrix::from_rows(rows)?)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::try_from(Matrix::from_int_rows(rows)?)
    }

    /// `u vᵀ + v uᵀ` halved: the symmetric outer product.
    pub fn outer(u: &[Rational]) -> Self {
        let n = u.len();
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                s.set(i, j, &u[i] * &u[j]);
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.0.get(i, j)
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.0.set(j, i, v.clone());
        self.0.set(i, j, v);
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SymMatrix(self.0.scale(c))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.dim(), other.dim())?;
        let mut out = self.clone();
        for (a, b) in out.0.data.iter_mut().zip(&other.0.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `yᵀ Q x`.
    pub fn bilinear(&self, y: &[Rational], x: &[Rational]) -> Result<Rational> {
        check_dim(self.dim(), y.len())?;
        let qx = self.0.mul_vec(x)?;
        Ok(rational::dot(y, &qx))
    }

    pub fn quadratic(&self, x: &[Rational]) -> Result<Rational> {
        self.bilinear(x, x)
    }

    pub fn bilinear_f64(&self, y: &[f64], x: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += y[i] * rational::to_f64(self.get(i, j)) * x[j];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> Rational {
        rational::max_abs(&self.0.data)
    }

    /// Congruence `Pᵀ Q P`.
    pub fn congruence(&self, p: &Matrix) -> Result<SymMatrix> {
        let out = p.transpose().mul(&self.0)?.mul(p)?;
        SymMatrix::try_from(out)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        self.0.to_f64()
    }

    /// Ascending floating eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.to_f64())
    }

    /// Smallest eigenvalue is at least `-rel_tol * max|Q_ij|`.
    pub fn is_psd(&self, rel_tol: f64) -> bool {
        let scale = rational::to_f64(&self.max_abs()).max(f64::MIN_POSITIVE);
        self.eigenvalues().first().is_none_or(|&l| l >= -rel_tol * scale)
    }

    /// Exact signature.
    pub fn inertia(&self) -> Inertia {
        inertia(self)
    }
}

impl TryFrom<Matrix> for SymMatrix {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("symmetric matrix must be square".into()));
        }
        for i in 0..m.rows {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidInput(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(SymMatrix(m))
    }
}

impl From<SymMatrix> for Matrix {
    fn from(s: SymMatrix) -> Matrix {
        s.0
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Inertia { n_plus, n_minus, n_zero }
    }
}

/// Exact signature by symmetric-pivoted LDLᵀ over the rationals.
///
/// A nonzero diagonal entry is eliminated as a 1×1 pivot. When the remaining
/// diagonal is entirely zero but some off-diagonal `b` is not, the 2×2 block
/// `[[0, b], [b, 0]]` is eliminated; it contributes one positive and one
/// negative eigenvalue. Sylvester's law of inertia makes the count exact.
pub fn inertia(q: &SymMatrix) -> Inertia {
    let mut s: Vec<Vec<Rational>> = q.as_matrix().to_rows();
    let mut out = Inertia::new(0, 0, 0);
    while !s.is_empty() {
        let k = s.len();
        if let Some(p) = (0..k).find(|&i| !s[i][i].is_zero()) {
            let d = s[p][p].clone();
            if d.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            let rest: Vec<usize> = (0..k).filter(|&i| i != p).collect();
            s = rest
                .iter()
                .map(|&i| {
                    rest.iter()
                        .map(|&j| &s[i][j] - &s[i][p] * &s[p][j] / &d)
                        .collect()
                })
                .collect();
            continue;
        }
        let off = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).find(|&(i, j)| !s[i][j].is_zero());
        let Some((a, b)) = off else {
            out.n_zero += k;
            break;
        };
        out.n_plus += 1;
        out.n_minus += 1;
        // B = [[0, c], [c, 0]], B⁻¹ = [[0, 1/c], [1/c, 0]].
        let c = s[a][b].clone();
        let rest: Vec<usize> = (0..k).filter(|&i| i != a && i != b).collect();
        s = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| {
                        let correction = (&s[i][a] * &s[b][j] + &s[i][b] * &s[a][j]) / &c;
                        &s[i][j] - correction
                    })
                    .collect()
            })
            .collect();
    }
    out
}

pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a general real matrix, sorted by real part then imaginary part.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let mut ev: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
