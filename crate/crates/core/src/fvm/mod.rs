//! Δ-adapted two-point finite volumes: one unknown per cell, the discrete
//! Laplacian `Δ_K`, the gradient `∇_K`, and `H_D = Δ_K/√2 · Id`. The modified
//! variant only changes the function reconstruction used for the source.

use rayon::prelude::*;

use crate::error::{HdmError, Result};
use crate::hdm::{BTensor, BasisSample, CellSamples, Degrees, Discretisation, DofMap};
use crate::linalg::{solve_spd, CgOptions, TripletBuilder};
use crate::mesh::{check_delta_adapted, Mesh};
use crate::scalar::{dot, scale, sub, Point, Real};

/// Sparse per-cell row of a linear operator on cell values.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil<V> {
    pub cells: Vec<usize>,
    pub coeffs: Vec<V>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FvmVariant {
    /// `Π_D v = v_K` on K.
    Plain,
    /// `Π_{D*} v = v_K + ∇̃_K v · (x − x_K)` on K.
    Modified,
}

pub struct FvmOps<'m, T> {
    mesh: &'m Mesh<T>,
    variant: FvmVariant,
    d_sigma: Vec<T>,
    constrained: Vec<bool>,
    laplacian: Vec<Stencil<T>>,
    gradient: Vec<Stencil<Point<T>>>,
    consistent: Vec<Stencil<Point<T>>>,
}

/// Builds the two-point stencils. Cells touching `∂Ω` are constrained to zero
/// and boundary faces carry no jump.
pub fn fvm_ops<T: Real>(mesh: &Mesh<T>, variant: FvmVariant) -> Result<FvmOps<'_, T>> {
    let report = check_delta_adapted(mesh)?;
    if !report.admissible {
        return Err(HdmError::NotAdmissible { faces: report.orthogonality_violations });
    }
    let d_sigma = report.d_sigma;
    let stencils: Vec<_> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| {
            let cell = &mesh.cells[k];
            let inv = T::one() / cell.measure;
            let mut cells = vec![k];
            let (mut lap, mut grad) = (vec![T::zero()], vec![[T::zero(); 2]]);
            let mut cons = vec![[T::zero(); 2]];
            for &f in &cell.faces {
                let face = &mesh.faces[f];
                let Some(l) = face.neighbor(k) else { continue };
                let t = inv * face.measure / d_sigma[f];
                let g = scale(t, sub(face.midpoint, cell.center));
                // v_σ = (dist(x_K,σ) v_L + dist(x_L,σ) v_K)/d_σ
                let n = mesh.outward_normal(k, f);
                let w = inv * face.measure / d_sigma[f];
                let (dk, dl) = (mesh.center_face_distance(k, f), mesh.center_face_distance(l, f));
                cells.push(l);
                lap[0] -= t;
                lap.push(t);
                grad[0] = sub(grad[0], g);
                grad.push(g);
                cons[0] = [cons[0][0] + w * dl * n[0], cons[0][1] + w * dl * n[1]];
                cons.push(scale(w * dk, n));
            }
            (
                Stencil { cells: cells.clone(), coeffs: lap },
                Stencil { cells: cells.clone(), coeffs: grad },
                Stencil { cells, coeffs: cons },
            )
        })
        .collect();
    let mut laplacian = Vec::with_capacity(stencils.len());
    let mut gradient = Vec::with_capacity(stencils.len());
    let mut consistent = Vec::with_capacity(stencils.len());
    for (l, g, c) in stencils {
        laplacian.push(l);
        gradient.push(g);
        consistent.push(c);
    }
    let constrained = (0..mesh.n_cells()).map(|k| mesh.touches_boundary(k)).collect();
    Ok(FvmOps { mesh, variant, d_sigma, constrained, laplacian, gradient, consistent })
}

fn apply_scalar<T: Real>(s: &Stencil<T>, v: &[T]) -> T {
    s.cells.iter().zip(&s.coeffs).map(|(&c, &a)| a * v[c]).sum()
}

fn apply_vector<T: Real>(s: &Stencil<Point<T>>, v: &[T]) -> Point<T> {
    s.cells.iter().zip(&s.coeffs).fold([T::zero(); 2], |acc, (&c, a)| [acc[0] + a[0] * v[c], acc[1] + a[1] * v[c]])
}

impl<'m, T: Real> FvmOps<'m, T> {
    pub fn variant(&self) -> FvmVariant {
        self.variant
    }

    /// The same stencils with the other function reconstruction.
    pub fn with_variant(&self, variant: FvmVariant) -> Self {
        Self {
            mesh: self.mesh,
            variant,
            d_sigma: self.d_sigma.clone(),
            constrained: self.constrained.clone(),
            laplacian: self.laplacian.clone(),
            gradient: self.gradient.clone(),
            consistent: self.consistent.clone(),
        }
    }

    pub fn d_sigma(&self) -> &[T] {
        &self.d_sigma
    }

    pub fn laplacian_stencil(&self, cell: usize) -> &Stencil<T> {
        &self.laplacian[cell]
    }

    /// `Δ_K v` on every cell.
    pub fn cell_laplacian(&self, v: &[T]) -> Vec<T> {
        self.laplacian.iter().map(|s| apply_scalar(s, v)).collect()
    }

    /// `∇_K v` on every cell.
    pub fn cell_gradient(&self, v: &[T]) -> Vec<Point<T>> {
        self.gradient.iter().map(|s| apply_vector(s, v)).collect()
    }

    /// `∇̃_K v = (1/|K|) Σ |σ| v_σ n_{K,σ}` on every cell.
    pub fn consistent_gradient(&self, v: &[T]) -> Vec<Point<T>> {
        self.consistent.iter().map(|s| apply_vector(s, v)).collect()
    }
}

/// `∇̃_K v` computed from the mesh alone, with `d_σ` the sum of the two
/// orthogonal center distances.
pub fn consistent_gradient<T: Real>(mesh: &Mesh<T>, v: &[T]) -> Vec<Point<T>> {
    (0..mesh.n_cells())
        .map(|k| {
            let cell = &mesh.cells[k];
            let mut acc = [T::zero(); 2];
            for &f in &cell.faces {
                let face = &mesh.faces[f];
                let Some(l) = face.neighbor(k) else { continue };
                let (dk, dl) = (mesh.center_face_distance(k, f), mesh.center_face_distance(l, f));
                let v_sigma = (dk * v[l] + dl * v[k]) / (dk + dl);
                let n = mesh.outward_normal(k, f);
                acc = [acc[0] + face.measure * v_sigma * n[0], acc[1] + face.measure * v_sigma * n[1]];
            }
            scale(T::one() / cell.measure, acc)
        })
        .collect()
}

impl<'m, T: Real> Discretisation<T> for FvmOps<'m, T> {
    fn name(&self) -> &str {
        match self.variant {
            FvmVariant::Plain => "fvm",
            FvmVariant::Modified => "mfvm",
        }
    }

    fn mesh(&self) -> &Mesh<T> {
        self.mesh
    }

    fn btensor(&self) -> BTensor {
        BTensor::TraceLaplacian
    }

    fn degrees(&self) -> Degrees {
        Degrees { gram: 1, mass: 2, rhs: 4, error: 6 }
    }

    fn n_dofs(&self) -> usize {
        self.mesh.n_cells()
    }

    fn constrained(&self) -> &[bool] {
        &self.constrained
    }

    fn sample_cell(&self, cell: usize, points: &[Point<T>]) -> CellSamples<T> {
        let lap = &self.laplacian[cell];
        let grad = &self.gradient[cell];
        let cons = &self.consistent[cell];
        let xk = self.mesh.cells[cell].center;
        let root = T::SQRT_2();
        let mut samples = Vec::with_capacity(points.len() * lap.cells.len());
        for &x in points {
            let offset = sub(x, xk);
            for (a, &c) in lap.cells.iter().enumerate() {
                let own = if c == cell { T::one() } else { T::zero() };
                let value = match self.variant {
                    FvmVariant::Plain => own,
                    FvmVariant::Modified => own + dot(cons.coeffs[a], offset),
                };
                let h = lap.coeffs[a] / root;
                let hess = [[h, T::zero()], [T::zero(), h]];
                samples.push(BasisSample { value, grad: grad.coeffs[a], hess, report: hess });
            }
        }
        CellSamples { dofs: lap.cells.clone(), samples }
    }
}

/// `∫ f Π_{D*} φ_i = Σ_K (φ_i)_K ∫_K f + ∇̃_K φ_i · ∫_K f (x − x_K)` over the
/// free cells, with degree-4 cell integrals.
pub fn modified_fvm_rhs<T, F>(ops: &FvmOps<'_, T>, f: F) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(Point<T>) -> Result<T> + Sync,
{
    let mesh = ops.mesh;
    let map = DofMap::new(&ops.constrained);
    let moments: Vec<(T, Point<T>)> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| {
            let (pts, w) = crate::hdm::cell_quadrature(mesh, k, 4)?;
            let xk = mesh.cells[k].center;
            let mut m0 = T::zero();
            let mut m1 = [T::zero(); 2];
            for (&x, &wq) in pts.iter().zip(&w) {
                let fx = f(x)? * wq;
                let d = sub(x, xk);
                m0 += fx;
                m1 = [m1[0] + fx * d[0], m1[1] + fx * d[1]];
            }
            Ok((m0, m1))
        })
        .collect::<Result<_>>()?;
    let mut rhs = vec![T::zero(); map.n_free()];
    for (k, (m0, m1)) in moments.iter().enumerate() {
        let s = &ops.consistent[k];
        for (&c, g) in s.cells.iter().zip(&s.coeffs) {
            let Some(r) = map.free_index[c] else { continue };
            if c == k {
                rhs[r] += *m0;
            }
            rhs[r] += dot(*g, *m1);
        }
    }
    Ok(rhs)
}

/// TPFA interpolant: the zero-extended cell vector `P` solving
/// `|K| Δ_K P = ∫_K Δφ` on every free cell.
pub fn tpfa_interpolant<T, F>(ops: &FvmOps<'_, T>, laplacian: F, opts: &CgOptions<T>) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(Point<T>) -> Result<T> + Sync,
{
    let mesh = ops.mesh;
    let map = DofMap::new(&ops.constrained);
    if map.n_free() == 0 {
        return Err(HdmError::EmptyConstrainedSpace);
    }
    let mut builder = TripletBuilder::new(map.n_free());
    let mut rhs = vec![T::zero(); map.n_free()];
    for (k, s) in ops.laplacian.iter().enumerate() {
        let Some(r) = map.free_index[k] else { continue };
        let area = mesh.cells[k].measure;
        for (&c, &a) in s.cells.iter().zip(&s.coeffs) {
            if let Some(col) = map.free_index[c] {
                builder.add(r, col, -area * a);
            }
        }
        let (pts, w) = crate::hdm::cell_quadrature(mesh, k, 4)?;
        let mut integral = T::zero();
        for (&x, &wq) in pts.iter().zip(&w) {
            integral += wq * laplacian(x)?;
        }
        rhs[r] = -integral;
    }
    let (p, _) = solve_spd(&builder.build(), &rhs, opts)?;
    Ok(map.expand(&p))
}
