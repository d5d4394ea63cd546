use super::sparse::{dot, norm2, CsrMatrix, SparseSystem};
use crate::error::{HdmError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct CgOptions<T> {
    /// Stop once the recurrence residual satisfies `‖r‖ ≤ tol ‖b‖`.
    pub tol: T,
    /// Defaults to `50 n`.
    pub max_iterations: Option<usize>,
    pub record_history: bool,
}

impl<T: Real> Default for CgOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-12), max_iterations: None, record_history: false }
    }
}

impl<T: Real> CgOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct CgReport<T> {
    pub iterations: usize,
    /// Relative recurrence residual at exit.
    pub residual: T,
    /// Relative residual after each iteration, when requested.
    pub history: Vec<T>,
}

/// Solves `A x = b` for symmetric positive definite `A` starting from zero.
pub fn solve_spd<T: Real>(a: &CsrMatrix<T>, b: &[T], opts: &CgOptions<T>) -> Result<(Vec<T>, CgReport<T>)> {
    let mut x = vec![T::zero(); a.n];
    let report = solve_spd_from(a, b, &mut x, opts)?;
    Ok((x, report))
}

/// Jacobi-preconditioned conjugate gradient from the initial guess in `x`.
pub fn solve_spd_from<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    opts: &CgOptions<T>,
) -> Result<CgReport<T>> {
    let n = a.n;
    assert_eq!(b.len(), n);
    assert_eq!(x.len(), n);
    let max_iterations = opts.max_iterations.unwrap_or(50 * n.max(1));
    let mut history = Vec::new();

    let nb = norm2(b);
    if nb == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return Ok(CgReport { iterations: 0, residual: T::zero(), history });
    }

    let inv_diag: Vec<T> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > T::zero() { T::one() / d } else { T::one() })
        .collect();

    let mut r = a.mul_vec(x);
    for (ri, &bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut rel = norm2(&r) / nb;
    if rel <= opts.tol {
        return Ok(CgReport { iterations: 0, residual: rel, history });
    }
    let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&ri, &d)| ri * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![T::zero(); n];

    for it in 1..=max_iterations {
        a.mul_vec_into(&p, &mut ap);
        let curvature = dot(&p, &ap);
        if !(curvature > T::zero()) {
            return Err(HdmError::NonPositiveCurvature { iteration: it, curvature: curvature.as_f64() });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = norm2(&r) / nb;
        if opts.record_history {
            history.push(rel);
        }
        if rel <= opts.tol {
            return Ok(CgReport { iterations: it, residual: rel, history });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(HdmError::NotConverged { iterations: max_iterations, residual: rel.as_f64() })
}

impl<T: Real> SparseSystem<T> {
    /// Solves the system in place and returns the solver report.
    pub fn solve(&mut self, opts: &CgOptions<T>) -> Result<CgReport<T>> {
        let mut x = self.solution.take().unwrap_or_else(|| vec![T::zero(); self.dim()]);
        let report = solve_spd_from(&self.matrix, &self.rhs, &mut x, opts)?;
        self.solution = Some(x);
        Ok(report)
    }
}
