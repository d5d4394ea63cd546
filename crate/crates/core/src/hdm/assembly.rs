use rayon::prelude::*;

use super::{sample_at_quadrature, BasisSample, Discretisation, DofMap};
use crate::error::{HdmError, Result};
use crate::linalg::{CgOptions, CgReport, CsrMatrix, SparseSystem, TripletBuilder};
use crate::scalar::{dot, frobenius, Point, Real};

type LocalBlock<T> = (Vec<usize>, Vec<T>);

/// Matrix of `Σ_K ∫_K form(φ_i, φ_j)` over the free dofs.
pub fn assemble_bilinear<T, D, F>(ops: &D, map: &DofMap, degree: usize, form: F) -> Result<CsrMatrix<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(&BasisSample<T>, &BasisSample<T>) -> T + Sync,
{
    let blocks: Vec<LocalBlock<T>> = (0..ops.mesh().n_cells())
        .into_par_iter()
        .map(|k| {
            let (s, _, w) = sample_at_quadrature(ops, k, degree)?;
            let local: Vec<(usize, usize)> = s
                .dofs
                .iter()
                .enumerate()
                .filter_map(|(a, &g)| map.free_index[g].map(|r| (a, r)))
                .collect();
            let m = local.len();
            let mut values = vec![T::zero(); m * m];
            for (q, &wq) in w.iter().enumerate() {
                let at = s.at(q);
                for (i, &(a, _)) in local.iter().enumerate() {
                    for (j, &(b, _)) in local.iter().enumerate().skip(i) {
                        values[i * m + j] += wq * form(&at[a], &at[b]);
                    }
                }
            }
            for i in 0..m {
                for j in 0..i {
                    values[i * m + j] = values[j * m + i];
                }
            }
            Ok((local.into_iter().map(|(_, r)| r).collect(), values))
        })
        .collect::<Result<_>>()?;
    let mut builder = TripletBuilder::with_capacity(map.n_free(), blocks.iter().map(|b| b.1.len()).sum());
    for (rows, values) in &blocks {
        let m = rows.len();
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in rows.iter().enumerate() {
                builder.add(r, c, values[i * m + j]);
            }
        }
    }
    Ok(builder.build())
}

/// Gram matrix of `a_D(u, v) = ∫ H_D^B u : H_D^B v`.
pub fn assemble_gram<T: Real, D: Discretisation<T> + ?Sized>(ops: &D, map: &DofMap) -> Result<CsrMatrix<T>> {
    assemble_bilinear(ops, map, ops.degrees().gram, |a, b| frobenius(&a.hess, &b.hess))
}

/// Load vector `b_i = ∫ t·Π φ_i + τ·∇φ_i + θ:H φ_i` where `target(x)` returns
/// `(t, τ, θ)` packed as a sample; the `report` slot is ignored.
pub fn assemble_functional<T, D, F>(ops: &D, map: &DofMap, degree: usize, target: F) -> Result<Vec<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<BasisSample<T>> + Sync,
{
    let blocks: Vec<LocalBlock<T>> = (0..ops.mesh().n_cells())
        .into_par_iter()
        .map(|k| {
            let (s, p, w) = sample_at_quadrature(ops, k, degree)?;
            let mut values = vec![T::zero(); s.n_local()];
            for (q, (&x, &wq)) in p.iter().zip(&w).enumerate() {
                let t = target(x)?;
                for (a, phi) in s.at(q).iter().enumerate() {
                    values[a] += wq * (t.value * phi.value + dot(t.grad, phi.grad) + frobenius(&t.hess, &phi.hess));
                }
            }
            Ok((s.dofs, values))
        })
        .collect::<Result<_>>()?;
    let mut b = vec![T::zero(); map.n_free()];
    for (dofs, values) in &blocks {
        for (&g, &v) in dofs.iter().zip(values) {
            if let Some(r) = map.free_index[g] {
                b[r] += v;
            }
        }
    }
    Ok(b)
}

/// Right-hand side `∫ f Π_D φ_i`.
pub fn assemble_rhs<T, D, F>(ops: &D, map: &DofMap, f: F) -> Result<Vec<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<T> + Sync,
{
    assemble_functional(ops, map, ops.degrees().rhs, |x| {
        Ok(BasisSample { value: f(x)?, ..BasisSample::zero() })
    })
}

/// The reduced Hessian-scheme system over the free dofs.
pub fn assemble_hessian_scheme<T, D, F>(ops: &D, f: F) -> Result<(SparseSystem<T>, DofMap)>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<T> + Sync,
{
    let map = DofMap::new(ops.constrained());
    if map.n_free() == 0 {
        return Err(HdmError::EmptyConstrainedSpace);
    }
    let matrix = assemble_gram(ops, &map)?;
    let rhs = assemble_rhs(ops, &map, f)?;
    Ok((SparseSystem::new(matrix, rhs), map))
}

#[derive(Debug, Clone)]
pub struct SolveOptions<T> {
    pub cg: CgOptions<T>,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self { cg: CgOptions::default() }
    }
}

/// Dof vector of a solved Hessian scheme over all dofs; constrained entries are zero.
#[derive(Debug, Clone)]
pub struct DiscreteSolution<T> {
    pub dofs: Vec<T>,
    pub n_free: usize,
    pub solver: CgReport<T>,
    /// Relative true residual `‖Au − b‖/‖b‖` of the reduced system.
    pub galerkin_defect: T,
}

pub fn solve_hessian_scheme<T, D, F>(ops: &D, f: F, opts: &SolveOptions<T>) -> Result<DiscreteSolution<T>>
where
    T: Real,
    D: Discretisation<T> + ?Sized,
    F: Fn(Point<T>) -> Result<T> + Sync,
{
    let (mut system, map) = assemble_hessian_scheme(ops, f)?;
    let report = system.solve(&opts.cg)?;
    let reduced = system.solution.take().unwrap_or_default();
    let defect = galerkin_defect(&system, &reduced);
    Ok(DiscreteSolution { dofs: map.expand(&reduced), n_free: map.n_free(), solver: report, galerkin_defect: defect })
}

/// `max_i |a_D(u, φ_i) − (f, Π φ_i)|` relative to `max_i |(f, Π φ_i)|`.
pub fn galerkin_defect<T: Real>(system: &SparseSystem<T>, reduced: &[T]) -> T {
    let au = system.matrix.mul_vec(reduced);
    let scale = system.rhs.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return au.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    }
    au.iter().zip(&system.rhs).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs())) / scale
}
