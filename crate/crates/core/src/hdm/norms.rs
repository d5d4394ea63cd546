use rayon::prelude::*;

use super::{sample_at_quadrature, Discretisation, Jet};
use crate::error::Result;
use crate::scalar::{frobenius, mat_sub, sub, Point, Real};

/// Absolute errors of the three reconstructions together with the norms of
/// the exact quantities they are compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms<T> {
    pub l2: T,
    pub h1: T,
    pub h2: T,
    pub norm_u: T,
    pub norm_grad: T,
    pub norm_hess: T,
}

impl<T: Real> ErrorNorms<T> {
    fn ratio(e: T, n: T) -> T {
        if n == T::zero() {
            e
        } else {
            e / n
        }
    }

    pub fn rel_l2(&self) -> T {
        Self::ratio(self.l2, self.norm_u)
    }

    pub fn rel_h1(&self) -> T {
        Self::ratio(self.h1, self.norm_grad)
    }

    pub fn rel_h2(&self) -> T {
        Self::ratio(self.h2, self.norm_hess)
    }
}

/// `‖Π_D u − u‖`, `‖∇_D u − ∇u‖` and `‖H u − Bℋu‖` where `H` is the
/// scheme's reported Hessian. With the trace variant of B the last is the
/// Laplacian error `‖Δ_D u − Δu‖`.
pub fn error_norms<T, D, F>(ops: &D, dofs: &[T], exact: F) -> Result<ErrorNorms<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<Jet<T>> + Sync,
{
    misfit(ops, dofs, exact, true)
}

/// As [`error_norms`]; `reported = false` compares `H_D^B` itself.
pub(crate) fn misfit<T, D, F>(ops: &D, dofs: &[T], exact: F, reported: bool) -> Result<ErrorNorms<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<Jet<T>> + Sync,
{
    let b = ops.btensor();
    let degree = ops.degrees().error;
    let per_cell: Vec<[T; 6]> = (0..ops.mesh().n_cells())
        .into_par_iter()
        .map(|k| {
            let (s, p, w) = sample_at_quadrature(ops, k, degree)?;
            let mut acc = [T::zero(); 6];
            for (q, (&x, &wq)) in p.iter().zip(&w).enumerate() {
                let e = exact(x)?;
                let r = s.combine(q, dofs);
                let bh = b.apply(&e.hess);
                let dg = sub(r.grad, e.grad);
                let dh = mat_sub(if reported { r.report } else { r.hess }, bh);
                acc[0] += wq * (r.value - e.value).powi(2);
                acc[1] += wq * (dg[0] * dg[0] + dg[1] * dg[1]);
                acc[2] += wq * frobenius(&dh, &dh);
                acc[3] += wq * e.value * e.value;
                acc[4] += wq * (e.grad[0] * e.grad[0] + e.grad[1] * e.grad[1]);
                acc[5] += wq * frobenius(&bh, &bh);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = [T::zero(); 6];
    for acc in &per_cell {
        for i in 0..6 {
            total[i] += acc[i];
        }
    }
    let [l2, h1, h2, nu, ng, nh] = total.map(|v| v.sqrt());
    Ok(ErrorNorms { l2, h1, h2, norm_u: nu, norm_grad: ng, norm_hess: nh })
}
