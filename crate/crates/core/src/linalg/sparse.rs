use crate::scalar::Real;

use rayon::prelude::*;
use std::io::Write;

/// Accumulates `(row, col, value)` contributions; duplicates are summed
/// during compression in a fixed order.
#[derive(Debug, Clone)]
pub struct TripletBuilder<T> {
    n: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Real> TripletBuilder<T> {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, capacity: usize) -> Self {
        Self { n, entries: Vec::with_capacity(capacity) }
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: T) {
        debug_assert!(row < self.n && col < self.n);
        self.entries.push((row, col, value));
    }

    pub fn build(mut self) -> CsrMatrix<T> {
        // stable sort keeps the insertion order of duplicates
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<T> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { n: self.n, row_ptr, col_idx, values }
    }
}

/// Square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let mut b = TripletBuilder::new(rows.len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != T::zero() {
                    b.add(i, j, v);
                }
            }
        }
        b.build()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let cols = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(p) => self.values[self.row_ptr[i] + p],
            Err(_) => T::zero(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    /// `y = A x`; rows are independent so the parallel result is deterministic.
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        y.par_iter_mut().with_min_len(512).enumerate().for_each(|(i, yi)| {
            let mut s = T::zero();
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[p] * x[self.col_idx[p]];
            }
            *yi = s;
        });
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let ay = self.mul_vec(y);
        dot(x, &ay)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Largest `|A_ij − A_ji|` over stored pairs.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, rel_tol: T) -> bool {
        self.asymmetry() <= rel_tol * self.max_abs()
    }

    /// Coordinate text dump: one `i j value` line per stored entry.
    pub fn write_coordinate<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut buf = String::new();
        use std::fmt::Write as _;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                writeln!(buf, "{i} {j} {:.16e}", v.as_f64()).unwrap();
            }
        }
        out.write_all(buf.as_bytes())
    }
}

/// The linear system of a Hessian scheme over its free unknowns.
#[derive(Debug, Clone)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
    pub solution: Option<Vec<T>>,
}

impl<T: Real> SparseSystem<T> {
    pub fn new(matrix: CsrMatrix<T>, rhs: Vec<T>) -> Self {
        assert_eq!(matrix.n, rhs.len());
        Self { matrix, rhs, solution: None }
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    /// `‖Ax − b‖ / ‖b‖` (absolute residual when `b = 0`).
    pub fn relative_residual(&self, x: &[T]) -> T {
        let ax = self.matrix.mul_vec(x);
        let r: Vec<T> = ax.iter().zip(&self.rhs).map(|(&a, &b)| a - b).collect();
        let nb = norm2(&self.rhs);
        let nr = norm2(&r);
        if nb > T::zero() {
            nr / nb
        } else {
            nr
        }
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
