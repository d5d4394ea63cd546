use super::assembly::{assemble_bilinear, assemble_functional, assemble_gram};
use super::norms::misfit;
use super::{BasisSample, Discretisation, DofMap, Jet};
use crate::error::{HdmError, Result};
use crate::linalg::{solve_spd, solve_spd_from, CgOptions, CsrMatrix};
use crate::scalar::{dot, frobenius, Mat2, Point, Real};

/// Square root of the minimum over `X_{D,0}` of
/// `‖Π w − φ‖² + ‖∇_D w − ∇φ‖² + ‖H_D^B w − Bℋφ‖²`, from the normal equations.
pub fn consistency_measure<T, D, F>(ops: &D, phi: F, opts: &CgOptions<T>) -> Result<T>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<Jet<T>> + Sync,
{
    let map = DofMap::new(ops.constrained());
    let b = ops.btensor();
    let deg = ops.degrees();
    let full = assemble_bilinear(ops, &map, deg.gram.max(deg.mass), |p, q| {
        p.value * q.value + dot(p.grad, q.grad) + frobenius(&p.hess, &q.hess)
    })?;
    let load = assemble_functional(ops, &map, deg.rhs.max(deg.mass), |x| {
        let j = phi(x)?;
        Ok(BasisSample { value: j.value, grad: j.grad, hess: b.apply(&j.hess), report: [[T::zero(); 2]; 2] })
    })?;
    let (w, _) = solve_spd(&full, &load, opts)?;
    let e = misfit(ops, &map.expand(&w), phi, false)?;
    Ok((e.l2 * e.l2 + e.h1 * e.h1 + e.h2 * e.h2).sqrt())
}

/// Dual norm of `w ↦ ∫ (ℋ:BᵀBξ) Π w − Bξ : H_D^B w` with respect to `‖H_D^B ·‖`.
#[derive(Debug, Clone)]
pub struct DualNorm<T> {
    pub value: T,
    /// Riesz representative `G⁻¹b` over all dofs.
    pub representer: Vec<T>,
    /// Load vector `b` over the free dofs.
    pub load: Vec<T>,
}

/// `xi(x)` returns `(ξ(x), (ℋ:BᵀBξ)(x))`.
pub fn limit_conformity_measure<T, D, F>(ops: &D, xi: F, opts: &CgOptions<T>) -> Result<DualNorm<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<(Mat2<T>, T)> + Sync,
{
    let map = DofMap::new(ops.constrained());
    if map.n_free() == 0 {
        return Err(HdmError::EmptyConstrainedSpace);
    }
    let b = ops.btensor();
    let deg = ops.degrees();
    let gram = assemble_gram(ops, &map)?;
    let load = assemble_functional(ops, &map, deg.rhs.max(deg.gram), |x| {
        let (m, div) = xi(x)?;
        let bm = b.apply(&m);
        Ok(BasisSample {
            value: div,
            grad: [T::zero(); 2],
            hess: [[-bm[0][0], -bm[0][1]], [-bm[1][0], -bm[1][1]]],
            report: [[T::zero(); 2]; 2],
        })
    })?;
    let (y, _) = solve_spd(&gram, &load, opts)?;
    let value = dot_n(&load, &y).max(T::zero()).sqrt();
    Ok(DualNorm { value, representer: map.expand(&y), load })
}

/// Largest of `‖Π w‖/‖H_D^B w‖` and `‖∇_D w‖/‖H_D^B w‖` over `X_{D,0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityEstimate<T> {
    pub value: T,
    pub function_ratio: T,
    pub gradient_ratio: T,
    pub iterations: usize,
}

const POWER_TOL: f64 = 1e-8;
const POWER_MAX: usize = 10_000;

pub fn coercivity_measure<T: Real, D: Discretisation<T> + ?Sized>(ops: &D) -> Result<CoercivityEstimate<T>> {
    let map = DofMap::new(ops.constrained());
    if map.n_free() == 0 {
        return Err(HdmError::EmptyConstrainedSpace);
    }
    let deg = ops.degrees();
    let gram = assemble_gram(ops, &map)?;
    let m0 = assemble_bilinear(ops, &map, deg.mass, |p, q| p.value * q.value)?;
    let m1 = assemble_bilinear(ops, &map, deg.mass, |p, q| dot(p.grad, q.grad))?;
    let (l0, i0) = largest_generalized_eigenvalue(&m0, &gram)?;
    let (l1, i1) = largest_generalized_eigenvalue(&m1, &gram)?;
    let (function_ratio, gradient_ratio) = (l0.sqrt(), l1.sqrt());
    Ok(CoercivityEstimate {
        value: function_ratio.max(gradient_ratio),
        function_ratio,
        gradient_ratio,
        iterations: i0 + i1,
    })
}

fn dot_n<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Power iteration on `G⁻¹M`, started from the all-ones vector. Each inner
/// solve is warm-started from the previous eigenvalue times the iterate.
fn largest_generalized_eigenvalue<T: Real>(m: &CsrMatrix<T>, g: &CsrMatrix<T>) -> Result<(T, usize)> {
    let inner = CgOptions::with_tol(T::lit(1e-10));
    let mut w = vec![T::one(); g.n];
    normalize(g, &mut w);
    let mut lambda = rayleigh(m, g, &w);
    let mut change = T::infinity();
    for it in 1..=POWER_MAX {
        let z = m.mul_vec(&w);
        let mut y: Vec<T> = w.iter().map(|&v| v * lambda).collect();
        solve_spd_from(g, &z, &mut y, &inner)?;
        normalize(g, &mut y);
        let next = rayleigh(m, g, &y);
        change = (next - lambda).abs() / next.abs().max(T::min_positive_value());
        w = y;
        lambda = next;
        if change <= T::lit(POWER_TOL) {
            return Ok((lambda, it));
        }
    }
    Err(HdmError::PowerIterationStalled { iterations: POWER_MAX, change: change.as_f64() })
}

fn normalize<T: Real>(g: &CsrMatrix<T>, w: &mut [T]) {
    let n = g.bilinear(w, w).sqrt();
    if n > T::zero() {
        let s = T::one() / n;
        w.iter_mut().for_each(|v| *v *= s);
    }
}

fn rayleigh<T: Real>(m: &CsrMatrix<T>, g: &CsrMatrix<T>, w: &[T]) -> T {
    m.bilinear(w, w) / g.bilinear(w, w)
}

