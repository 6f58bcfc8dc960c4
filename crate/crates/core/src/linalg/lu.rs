//! LU factorization with partial pivoting, generic over real and complex
//! scalars. Backs `(B±)⁻¹` applications, σ_min inverse iteration, and the
//! eigenvector solves of the matrix-function path.

use super::{Mat, Scalar};
use crate::error::{Error, Result};

/// Packed LU factors of a square matrix, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Mat<T>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Scalar> Lu<T> {
    /// Factor with partial pivoting. A pivot below `1e-14 * ||A||_inf`
    /// (absolute floor `f64::MIN_POSITIVE`) is treated as singular.
    pub fn factor(a: &Mat<T>) -> Result<Self> {
        assert!(a.is_square(), "LU requires a square matrix");
        let n = a.nrows();
        let tol = 1e-14 * a.norm_inf();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;

        for k in 0..n {
            let mut piv = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best <= tol.max(f64::MIN_POSITIVE) {
                return Err(Error::Singular { pivot: k });
            }
            if piv != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
                perm.swap(k, piv);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let sub = m * lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - sub;
                }
            }
        }
        Ok(Lu { lu, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        // forward: L y = P b
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // backward: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solve `Aᵀ x = b` (used by σ_min iteration on AᵀA).
    pub fn solve_transposed(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n, "rhs length mismatch");
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = b, Lᵀ y = w, x = Pᵀ y.
        let mut w = b.to_vec();
        for i in 0..n {
            let mut acc = w[i];
            for j in 0..i {
                acc = acc - self.lu[(j, i)] * w[j];
            }
            w[i] = acc / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = w[i];
            for j in i + 1..n {
                acc = acc - self.lu[(j, i)] * w[j];
            }
            w[i] = acc;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }

    /// Solve for every column of `B`.
    pub fn solve_mat(&self, b: &Mat<T>) -> Mat<T> {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let mut out = Mat::zeros(n, b.ncols());
        let mut col = vec![T::zero(); n];
        for j in 0..b.ncols() {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> Mat<T> {
        self.solve_mat(&Mat::identity(self.dim()))
    }

    pub fn det(&self) -> T {
        let mut d = if self.swaps % 2 == 0 {
            T::one()
        } else {
            -T::one()
        };
        for i in 0..self.dim() {
            d = d * self.lu[(i, i)];
        }
        d
    }
}
