//! Dense integer matrices, exact arithmetic, for the `Z^m ⋊ Z` machinery.
//!
//! Row-vector convention throughout: the automorphism acts on the right,
//! `v ↦ v·Q`, so the orbit of `(1,0)` is literally the first rows of the
//! powers of `Q`.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions {0}x{1} and {2}x{3} are incompatible")]
    Shape(usize, usize, usize, usize),
    #[error("matrix is not in GL_m(Z): determinant {0}")]
    NotUnimodular(String),
}

/// Row-major `rows × cols` matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Shape(r, c, r, c));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i32_rows(rows: &[&[i32]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| T::from(x)).collect())
                .collect(),
        )
        .expect("literal matrix must be rectangular and nonempty")
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut data = vec![T::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a.clone() * other.at(k, j).clone();
                    data[i * other.cols + j] = data[i * other.cols + j].clone() + term;
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Nonnegative power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Matrix<T> {
        assert_eq!(self.rows, self.cols, "pow of a non-square matrix");
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            exp >>= 1;
        }
        result
    }

    /// Determinant by cofactor expansion; fine for the small `m` used here.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        match self.rows {
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    let minor = self.minor(0, j).det();
                    let term = self.at(0, j).clone() * minor;
                    if j % 2 == 0 {
                        acc = acc + term;
                    } else {
                        acc = acc - term;
                    }
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Matrix<T> {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                data.push(self.at(i, j).clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Exact inverse of a matrix in `GL_m(Z)` via the adjugate.
    pub fn inverse_unimodular(&self) -> Result<Matrix<T>, MatrixError> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(MatrixError::NotUnimodular(det.to_string()));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Matrix {
                rows: 1,
                cols: 1,
                data: vec![det],
            });
        }
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                // Adjugate: transposed cofactors, divided by det = ±1.
                let cof = self.minor(j, i).det();
                let signed = if (i + j) % 2 == 0 { cof } else { T::zero() - cof };
                data[i * n + j] = if det.is_one() { signed } else { T::zero() - signed };
            }
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            data,
        })
    }
}

/// Row vector times matrix: `v·M`.
pub fn row_mul<T: Scalar>(v: &[T], m: &Matrix<T>) -> Vec<T> {
    assert_eq!(v.len(), m.rows(), "row_mul dimension mismatch");
    let mut out = vec![T::zero(); m.cols()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = slot.clone() + vi.clone() * m.at(i, j).clone();
        }
    }
    out
}

pub fn format_vector<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    fn q() -> Matrix<Int> {
        Matrix::from_i32_rows(&[&[2, 1], &[1, 1]])
    }

    #[test]
    fn multiplication_and_powers() {
        let q2 = q().mul(&q()).unwrap();
        assert_eq!(q2, Matrix::from_i32_rows(&[&[5, 3], &[3, 2]]));
        assert_eq!(q().pow(2), q2);
        assert_eq!(q().pow(0), Matrix::identity(2));
    }

    #[test]
    fn determinant_and_inverse() {
        assert_eq!(q().det(), Int::from(1));
        let inv = q().inverse_unimodular().unwrap();
        assert_eq!(q().mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(inv.mul(&q()).unwrap(), Matrix::identity(2));

        let neg = Matrix::<Int>::from_i32_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(neg.det(), Int::from(-1));
        let ninv = neg.inverse_unimodular().unwrap();
        assert_eq!(neg.mul(&ninv).unwrap(), Matrix::identity(2));

        let bad = Matrix::<Int>::from_i32_rows(&[&[2, 0], &[0, 1]]);
        assert!(bad.inverse_unimodular().is_err());
    }

    #[test]
    fn row_vector_action() {
        let v = vec![Int::from(1), Int::from(0)];
        assert_eq!(row_mul(&v, &q()), vec![Int::from(2), Int::from(1)]);
    }

    #[test]
    fn generic_over_i64() {
        let m = Matrix::<i64>::from_i32_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.pow(3).row(0), vec![13, 8]);
    }
}
