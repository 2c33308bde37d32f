//! Dense matrices, LU factorization with partial pivoting, and a one-norm
//! condition estimate (Hager's method with Higham's safeguard vector).
//!
//! The systems produced by the collocation schemes are small (tens of
//! unknowns) but can be severely ill-conditioned, so every factorization
//! carries its condition estimate.

use std::cell::Cell;
use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular: zero pivot in column {pivot}")]
    Singular { pivot: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    Shape {
        left: (usize, usize),
        right: (usize, usize),
    },
}

thread_local! {
    static FACTORIZATIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of LU factorizations performed on the current thread so far.
pub fn factorization_count() -> usize {
    FACTORIZATIONS.with(Cell::get)
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Elementwise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a * b).collect(),
        })
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.data[i * self.cols + j]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Elementwise product of two vectors.
pub fn hadamard<T: Scalar>(a: &[T], b: &[T]) -> Result<Vec<T>, LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::Shape {
            left: (a.len(), 1),
            right: (b.len(), 1),
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| x * y).collect())
}

pub(crate) fn norm_inf<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// LU factorization `P A = L U` with partial pivoting.
#[derive(Clone)]
pub struct LuFactor<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    norm_one: T,
    condition: T,
}

impl<T: Scalar> LuFactor<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self, LinalgError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        FACTORIZATIONS.with(|c| c.set(c.get() + 1));
        let norm_one = a.norm_one();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == T::zero() || !pivot.is_finite() {
                return Err(LinalgError::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / d;
                lu[(i, k)] = m;
                if m != T::zero() {
                    for j in k + 1..n {
                        lu[(i, j)] = lu[(i, j)] - m * lu[(k, j)];
                    }
                }
            }
        }
        let mut f = Self {
            lu,
            perm,
            norm_one,
            condition: T::zero(),
        };
        f.condition = norm_one * f.inverse_norm_one_estimate();
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, LinalgError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LinalgError::Dimension {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>, LinalgError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LinalgError::Dimension {
                expected: n,
                found: b.len(),
            });
        }
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = b, Lᵀ z = w, then x = Pᵀ z.
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for j in 0..i {
                s = s - self.lu[(j, i)] * w[j];
            }
            w[i] = s / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s = s - self.lu[(j, i)] * w[j];
            }
            w[i] = s;
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = w[k];
        }
        Ok(x)
    }

    /// Solves for every column of `b`.
    pub fn solve_matrix(&self, b: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        let mut out = Matrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j))?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// One-norm of the factored matrix.
    pub fn norm_one(&self) -> T {
        self.norm_one
    }

    /// Estimated one-norm condition number `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition_estimate(&self) -> T {
        self.condition
    }

    fn inverse_norm_one_estimate(&self) -> T {
        let n = self.dim();
        if n == 0 {
            return T::zero();
        }
        let nf = T::from_count(n);
        let mut x = vec![T::one() / nf; n];
        let mut estimate = T::zero();
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = match self.solve(&x) {
                Ok(y) => y,
                Err(_) => return T::infinity(),
            };
            let y_norm: T = y.iter().map(|v| v.abs()).sum();
            if y_norm <= estimate {
                break;
            }
            estimate = y_norm;
            let xi: Vec<T> = y
                .iter()
                .map(|&v| if v >= T::zero() { T::one() } else { -T::one() })
                .collect();
            let z = match self.solve_transpose(&xi) {
                Ok(z) => z,
                Err(_) => return T::infinity(),
            };
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, T::neg_infinity()), |b, c| if c.1 > b.1 { c } else { b });
            let ztx: T = z.iter().zip(&x).map(|(&a, &b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x = vec![T::zero(); n];
            x[j] = T::one();
        }
        // Higham's alternating test vector guards against Hager's worst cases.
        let alt: Vec<T> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { T::one() } else { -T::one() };
                let frac = if n > 1 {
                    T::from_count(i) / T::from_count(n - 1)
                } else {
                    T::zero()
                };
                s * (T::one() + frac)
            })
            .collect();
        if let Ok(y) = self.solve(&alt) {
            let alt_est = T::lit(2.0) * y.iter().map(|v| v.abs()).sum::<T>() / (T::lit(3.0) * nf);
            estimate = estimate.max(alt_est);
        }
        estimate
    }
}

/// Result of a dense solve with its diagnostics.
#[derive(Debug, Clone)]
pub struct DenseSolution<T> {
    pub x: Vec<T>,
    pub condition_estimate: T,
    pub residual_norm: T,
}

/// Solves a square dense system and reports the one-norm condition estimate
/// and the infinity-norm residual `‖Ax − b‖`.
pub fn solve_dense<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<DenseSolution<T>, LinalgError> {
    let lu = LuFactor::new(a)?;
    let x = lu.solve(b)?;
    let ax = a.mul_vec(&x)?;
    let residual_norm = norm_inf(&ax.iter().zip(b).map(|(&p, &q)| p - q).collect::<Vec<_>>());
    Ok(DenseSolution {
        x,
        condition_estimate: lu.condition_estimate(),
        residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    #[test]
    fn identity_system_returns_rhs() {
        let s = solve_dense(&Matrix::<f64>::identity(4), &[1.0, -2.0, 3.0, 0.5]).unwrap();
        assert_eq!(s.x, vec![1.0, -2.0, 3.0, 0.5]);
        assert!((s.condition_estimate - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_two_by_two() {
        let a = Matrix::<f64>::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]);
        let s = solve_dense(&a, &[2.0, 8.0]).unwrap();
        assert_eq!(s.x, vec![1.0, 2.0]);
        assert!((s.condition_estimate - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_pivot_reports_column() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(LuFactor::new(&a).err(), Some(LinalgError::Singular { pivot: 1 }));
        let a = Matrix::<f64>::zeros(3, 3);
        assert_eq!(LuFactor::new(&a).err(), Some(LinalgError::Singular { pivot: 0 }));
    }

    #[test]
    fn non_square_rejected() {
        let a = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(LuFactor::new(&a), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn transpose_solve_matches_transposed_factorization() {
        let mut seed = 7;
        let a = Matrix::from_fn(6, 6, |i, j| lcg(&mut seed) + if i == j { 3.0 } else { 0.0 });
        let b: Vec<f64> = (0..6).map(|i| i as f64 - 2.0).collect();
        let x1 = LuFactor::new(&a).unwrap().solve_transpose(&b).unwrap();
        let x2 = LuFactor::new(&a.transpose()).unwrap().solve(&b).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn condition_estimate_brackets_exact_value() {
        let mut seed = 99;
        for n in [3, 5, 8, 12] {
            let a = Matrix::from_fn(n, n, |_, _| lcg(&mut seed));
            let lu = LuFactor::new(&a).unwrap();
            let inv = lu.solve_matrix(&Matrix::identity(n)).unwrap();
            let exact = a.norm_one() * inv.norm_one();
            let est = lu.condition_estimate();
            assert!(est <= exact * (1.0 + 1e-10), "n={n}: est {est} > exact {exact}");
            assert!(est >= exact / 10.0, "n={n}: est {est} << exact {exact}");
        }
    }

    #[test]
    fn hadamard_vectors_and_shapes() {
        assert_eq!(hadamard(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), vec![3.0, 8.0]);
        assert!(hadamard(&[1.0], &[1.0, 2.0]).is_err());
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let ones = Matrix::from_fn(2, 2, |_, _| 1.0);
        assert_eq!(a.hadamard(&ones).unwrap(), a);
        assert!(a.hadamard(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn factorization_counter_increments() {
        let before = factorization_count();
        let _ = LuFactor::new(&Matrix::<f64>::identity(2)).unwrap();
        let _ = LuFactor::new(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(factorization_count() - before, 2);
    }
}
