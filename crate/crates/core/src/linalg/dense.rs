//! Small dense solves for local element matrices.

use crate::scalar::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting; `None` if a
    /// pivot falls below `1e-12` relative to the largest entry.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).unwrap())?;
            if a[(pivot, col)].abs() <= T::lit(1e-12) * scale {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = T::one() / a[(col, col)];
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for i in 0..n {
                if i != col {
                    let factor = a[(i, col)];
                    if factor != T::zero() {
                        for j in 0..n {
                            let (aij, ainv) = (a[(col, j)], inv[(col, j)]);
                            a[(i, j)] -= factor * aij;
                            inv[(i, j)] -= factor * ainv;
                        }
                    }
                }
            }
        }
        Some(inv)
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_a_small_matrix() {
        let mut a = DenseMatrix::<f64>::zeros(3);
        a.data = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).max_abs_diff(&DenseMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn singular_matrix() {
        let mut a = DenseMatrix::<f64>::zeros(2);
        a.data = vec![1.0, 2.0, 2.0, 4.0];
        assert!(a.inverse().is_none());
    }
}
