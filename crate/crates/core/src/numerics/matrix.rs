//! Row-major dense matrix with explicit shape checks.
//!
//! Every operation validates shapes and reports both operands on mismatch;
//! there is no implicit broadcasting.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from row-major data. Errors if the length does not
    /// match `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                "Matrix::from_vec",
                format!(
                    "data length {} does not fill {}x{}",
                    data.len(),
                    rows,
                    cols
                ),
            ));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Standard matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::shape(
                "matmul",
                format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        // i-k-j loop order keeps both operands in row-major streaming access.
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if self.cols != v.len() {
            return Err(Error::shape(
                "matvec",
                format!(
                    "cannot multiply {}x{} by vector of length {}",
                    self.rows,
                    self.cols,
                    v.len()
                ),
            ));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Transposed matrix-vector product `self^T * v`.
    pub fn tr_matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if self.rows != v.len() {
            return Err(Error::shape(
                "tr_matvec",
                format!(
                    "cannot multiply transpose of {}x{} by vector of length {}",
                    self.rows,
                    self.cols,
                    v.len()
                ),
            ));
        }
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let s = v[r];
            if s == 0.0 {
                continue;
            }
            let row = self.row(r);
            for (o, &a) in out.iter_mut().zip(row) {
                *o += s * a;
            }
        }
        Ok(out)
    }

    /// Accumulates the outer product `u * v^T` scaled by `scale` into `self`.
    pub fn add_outer(&mut self, u: &[f64], v: &[f64], scale: f64) -> Result<()> {
        if self.rows != u.len() || self.cols != v.len() {
            return Err(Error::shape(
                "add_outer",
                format!(
                    "outer product {}x{} does not fit {}x{}",
                    u.len(),
                    v.len(),
                    self.rows,
                    self.cols
                ),
            ));
        }
        for (r, &uv) in u.iter().enumerate() {
            let s = uv * scale;
            if s == 0.0 {
                continue;
            }
            let row = self.row_mut(r);
            for (o, &vv) in row.iter_mut().zip(v) {
                *o += s * vv;
            }
        }
        Ok(())
    }

    /// Cholesky factor L of a symmetric positive-definite matrix
    /// (`self = L L^T`). A non-positive pivot reports the offending column,
    /// which for normal-equation matrices signals rank deficiency.
    pub fn cholesky(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::shape(
                "cholesky",
                format!("matrix is {}x{}, not square", self.rows, self.cols),
            ));
        }
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut diag = self.get(j, j);
            for k in 0..j {
                diag -= l.get(j, k) * l.get(j, k);
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(Error::Design(format!(
                    "matrix is not positive definite at column {j} (pivot {diag:.3e}); \
                     the design may be rank-deficient"
                )));
            }
            let d = diag.sqrt();
            l.set(j, j, d);
            for i in (j + 1)..n {
                let mut acc = self.get(i, j);
                for k in 0..j {
                    acc -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, acc / d);
            }
        }
        Ok(l)
    }

    /// Solves `self * x = b` for symmetric positive-definite `self`.
    pub fn chol_solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if self.rows != b.len() {
            return Err(Error::shape(
                "chol_solve",
                format!(
                    "system is {}x{} but rhs has length {}",
                    self.rows,
                    self.cols,
                    b.len()
                ),
            ));
        }
        let l = self.cholesky()?;
        let n = self.rows;
        // forward substitution L y = b
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b[i];
            for k in 0..i {
                acc -= l.get(i, k) * y[k];
            }
            y[i] = acc / l.get(i, i);
        }
        // back substitution L^T x = y
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in (i + 1)..n {
                acc -= l.get(k, i) * x[k];
            }
            x[i] = acc / l.get(i, i);
        }
        Ok(x)
    }

    /// Inverse of a symmetric positive-definite matrix via its Cholesky factor.
    pub fn chol_inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.chol_solve(&e)?;
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive triple-loop product used as an independent oracle.
    fn matmul_naive(a: &Matrix, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0.0;
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut crate::RngStream) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| rng.uniform_range(-1.0, 1.0))
    }

    #[test]
    fn matmul_identity() {
        let a = Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let i2 = Matrix::identity(2);
        let prod = i2.matmul(&a).unwrap();
        assert_eq!(prod, a);
    }

    #[test]
    fn matmul_hand_case() {
        let a = Matrix::from_vec(1, 2, vec![1.0, 2.0]).unwrap();
        let b = Matrix::from_vec(2, 1, vec![3.0, 4.0]).unwrap();
        let prod = a.matmul(&b).unwrap();
        assert_eq!(prod.shape(), (1, 1));
        assert_eq!(prod.get(0, 0), 11.0);
    }

    #[test]
    fn matmul_matches_naive_oracle() {
        let mut rng = crate::RngStream::new(17, 0);
        let a = random_matrix(5, 7, &mut rng);
        let b = random_matrix(7, 3, &mut rng);
        let fast = a.matmul(&b).unwrap();
        let slow = matmul_naive(&a, &b);
        for (x, y) in fast.data().iter().zip(slow.data()) {
            assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn matmul_shape_error_names_both_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        let err = a.matmul(&b).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x3"), "{msg}");
    }

    #[test]
    fn matvec_and_transpose_agree_with_matmul() {
        let mut rng = crate::RngStream::new(18, 0);
        let a = random_matrix(4, 6, &mut rng);
        let v: Vec<f64> = (0..6).map(|_| rng.uniform_range(-2.0, 2.0)).collect();
        let got = a.matvec(&v).unwrap();
        let col = Matrix::from_vec(6, 1, v.clone()).unwrap();
        let want = a.matmul(&col).unwrap();
        for i in 0..4 {
            assert!((got[i] - want.get(i, 0)).abs() < 1e-14);
        }
        let u: Vec<f64> = (0..4).map(|_| rng.uniform_range(-2.0, 2.0)).collect();
        let got_t = a.tr_matvec(&u).unwrap();
        let want_t = a.transpose().matvec(&u).unwrap();
        for i in 0..6 {
            assert!((got_t[i] - want_t[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn cholesky_solve_recovers_solution() {
        // A = B^T B + I is symmetric positive definite.
        let mut rng = crate::RngStream::new(19, 0);
        let b = random_matrix(6, 4, &mut rng);
        let mut a = b.transpose().matmul(&b).unwrap();
        for i in 0..4 {
            a.set(i, i, a.get(i, i) + 1.0);
        }
        let x_true: Vec<f64> = (0..4).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
        let rhs = a.matvec(&x_true).unwrap();
        let x = a.chol_solve(&rhs).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-10);
        }
        let inv = a.chol_inverse().unwrap();
        let prod = a.matmul(&inv).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(matches!(a.cholesky(), Err(Error::Design(_))));
    }
}
