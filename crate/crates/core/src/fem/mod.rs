//! Nonconforming plate elements: the Morley triangle and the Adini rectangle.
//!
//! Both are stored the same way: per cell, the coefficients of the local
//! nodal basis in scaled monomials `ξ = (x − x_c)/s_x`, `η = (y − y_c)/s_y`,
//! obtained by inverting the matrix of dof functionals applied to monomials.

mod interpolate;
mod monomial;

pub use interpolate::{adini_interpolant, morley_interpolant, EdgeDof};

use rayon::prelude::*;

use crate::error::{HdmError, Result};
use crate::hdm::{BTensor, BasisSample, CellSamples, Degrees, Discretisation};
use crate::linalg::DenseMatrix;
use crate::mesh::Mesh;
use crate::scalar::{Point, Real};
use monomial::{MonomialSet, ADINI_EXPONENTS, P2_EXPONENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementType {
    Morley,
    Adini,
}

/// A dof functional: point value, or directional derivative at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional<T> {
    Value(Point<T>),
    Derivative(Point<T>, Point<T>),
}

#[derive(Debug, Clone)]
struct LocalElement<T> {
    center: Point<T>,
    scale: Point<T>,
    /// Column k holds the monomial coefficients of local basis function k.
    coeffs: DenseMatrix<T>,
    functionals: Vec<Functional<T>>,
}

/// Morley or Adini Hessian discretisation on a mesh.
pub struct FemOps<'m, T> {
    element: ElementType,
    mesh: &'m Mesh<T>,
    b: BTensor,
    monomials: MonomialSet,
    locals: Vec<LocalElement<T>>,
    cell_dofs: Vec<Vec<usize>>,
    constrained: Vec<bool>,
}

/// Dofs `0..n_v` are vertex values, `n_v + σ` the normal derivative on face σ
/// along its global normal. Boundary vertices and boundary faces are constrained.
pub fn morley_ops<T: Real>(mesh: &Mesh<T>, b: BTensor) -> Result<FemOps<'_, T>> {
    if let Some(k) = mesh.cells.iter().position(|c| c.vertices.len() != 3) {
        return Err(HdmError::NotTriangular(k));
    }
    let nv = mesh.n_vertices();
    let cell_dofs: Vec<Vec<usize>> = mesh
        .cells
        .iter()
        .map(|c| c.vertices.iter().copied().chain(c.faces.iter().map(|&f| nv + f)).collect())
        .collect();
    let mut constrained = mesh.boundary_vertex.clone();
    constrained.extend(mesh.faces.iter().map(|f| f.is_boundary()));
    let locals = build_locals(mesh, &P2_EXPONENTS, |k| {
        let c = &mesh.cells[k];
        let mut fs: Vec<Functional<T>> = c.vertices.iter().map(|&v| Functional::Value(mesh.vertices[v])).collect();
        fs.extend(c.faces.iter().map(|&f| Functional::Derivative(mesh.faces[f].midpoint, mesh.faces[f].normal)));
        (c.mass_center, [c.diameter, c.diameter], fs)
    })?;
    Ok(FemOps {
        element: ElementType::Morley,
        mesh,
        b,
        monomials: MonomialSet::new(&P2_EXPONENTS),
        locals,
        cell_dofs,
        constrained,
    })
}

/// Dofs `3v, 3v+1, 3v+2` are the value and the two partial derivatives at
/// vertex v; all three are constrained on the boundary.
pub fn adini_ops<T: Real>(mesh: &Mesh<T>, b: BTensor) -> Result<FemOps<'_, T>> {
    let mut rects = Vec::with_capacity(mesh.n_cells());
    for (k, c) in mesh.cells.iter().enumerate() {
        rects.push(mesh.axis_rectangle(c).ok_or(HdmError::NotRectangular(k))?);
    }
    let cell_dofs: Vec<Vec<usize>> = mesh
        .cells
        .iter()
        .map(|c| c.vertices.iter().flat_map(|&v| [3 * v, 3 * v + 1, 3 * v + 2]).collect())
        .collect();
    let constrained = mesh.boundary_vertex.iter().flat_map(|&b| [b; 3]).collect();
    let (ex, ey) = ([T::one(), T::zero()], [T::zero(), T::one()]);
    let locals = build_locals(mesh, &ADINI_EXPONENTS, |k| {
        let c = &mesh.cells[k];
        let [x0, y0, x1, y1] = rects[k];
        let half = T::lit(0.5);
        let fs = c
            .vertices
            .iter()
            .flat_map(|&v| {
                let p = mesh.vertices[v];
                [Functional::Value(p), Functional::Derivative(p, ex), Functional::Derivative(p, ey)]
            })
            .collect();
        ([(x0 + x1) * half, (y0 + y1) * half], [(x1 - x0) * half, (y1 - y0) * half], fs)
    })?;
    Ok(FemOps {
        element: ElementType::Adini,
        mesh,
        b,
        monomials: MonomialSet::new(&ADINI_EXPONENTS),
        locals,
        cell_dofs,
        constrained,
    })
}

type LocalSpec<T> = (Point<T>, Point<T>, Vec<Functional<T>>);

fn build_locals<T: Real, F>(mesh: &Mesh<T>, exponents: &[(u32, u32)], spec: F) -> Result<Vec<LocalElement<T>>>
where
    F: Fn(usize) -> LocalSpec<T> + Sync,
{
    let set = MonomialSet::new(exponents);
    (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| {
            let (center, scale, functionals) = spec(k);
            let n = exponents.len();
            let mut v = DenseMatrix::zeros(n);
            for (i, f) in functionals.iter().enumerate() {
                let row = apply_to_monomials(&set, center, scale, f);
                for j in 0..n {
                    v[(i, j)] = row[j];
                }
            }
            let coeffs = v.inverse().ok_or(HdmError::SingularLocalMatrix { cell: k })?;
            Ok(LocalElement { center, scale, coeffs, functionals })
        })
        .collect()
}

fn local_coords<T: Real>(center: Point<T>, scale: Point<T>, x: Point<T>) -> Point<T> {
    [(x[0] - center[0]) / scale[0], (x[1] - center[1]) / scale[1]]
}

fn apply_to_monomials<T: Real>(set: &MonomialSet, center: Point<T>, scale: Point<T>, f: &Functional<T>) -> Vec<T> {
    match *f {
        Functional::Value(p) => set.eval(local_coords(center, scale, p)).value,
        Functional::Derivative(p, d) => {
            let m = set.eval(local_coords(center, scale, p));
            (0..set.len()).map(|j| d[0] * m.dx[j] / scale[0] + d[1] * m.dy[j] / scale[1]).collect()
        }
    }
}

impl<'m, T: Real> FemOps<'m, T> {
    pub fn element(&self) -> ElementType {
        self.element
    }

    pub fn cell_dofs(&self, cell: usize) -> &[usize] {
        &self.cell_dofs[cell]
    }

    /// Local dof functionals of `cell`.
    pub fn functionals(&self, cell: usize) -> &[Functional<T>] {
        &self.locals[cell].functionals
    }

    /// Functionals applied to the local basis; the identity up to rounding.
    pub fn dof_matrix(&self, cell: usize) -> DenseMatrix<T> {
        let e = &self.locals[cell];
        let n = self.monomials.len();
        let mut out = DenseMatrix::zeros(n);
        for (i, f) in e.functionals.iter().enumerate() {
            let row = apply_to_monomials(&self.monomials, e.center, e.scale, f);
            for k in 0..n {
                out[(i, k)] = (0..n).map(|j| row[j] * e.coeffs[(j, k)]).sum();
            }
        }
        out
    }
}

impl<'m, T: Real> Discretisation<T> for FemOps<'m, T> {
    fn name(&self) -> &str {
        match self.element {
            ElementType::Morley => "morley",
            ElementType::Adini => "adini",
        }
    }

    fn mesh(&self) -> &Mesh<T> {
        self.mesh
    }

    fn btensor(&self) -> BTensor {
        self.b
    }

    fn degrees(&self) -> Degrees {
        match self.element {
            ElementType::Morley => Degrees { gram: 1, mass: 4, rhs: 4, error: 6 },
            ElementType::Adini => Degrees { gram: 4, mass: 8, rhs: 6, error: 8 },
        }
    }

    fn n_dofs(&self) -> usize {
        self.constrained.len()
    }

    fn constrained(&self) -> &[bool] {
        &self.constrained
    }

    fn sample_cell(&self, cell: usize, points: &[Point<T>]) -> CellSamples<T> {
        let e = &self.locals[cell];
        let n = self.monomials.len();
        let [sx, sy] = e.scale;
        let mut samples = Vec::with_capacity(points.len() * n);
        for &x in points {
            let m = self.monomials.eval(local_coords(e.center, e.scale, x));
            for k in 0..n {
                let mut s = BasisSample::zero();
                let mut h = [[T::zero(); 2]; 2];
                for j in 0..n {
                    let c = e.coeffs[(j, k)];
                    if c == T::zero() {
                        continue;
                    }
                    s.value += c * m.value[j];
                    s.grad[0] += c * m.dx[j];
                    s.grad[1] += c * m.dy[j];
                    h[0][0] += c * m.dxx[j];
                    h[0][1] += c * m.dxy[j];
                    h[1][1] += c * m.dyy[j];
                }
                s.grad = [s.grad[0] / sx, s.grad[1] / sy];
                h[0][0] /= sx * sx;
                h[0][1] /= sx * sy;
                h[1][1] /= sy * sy;
                h[1][0] = h[0][1];
                s.hess = self.b.apply(&h);
                s.report = s.hess;
                samples.push(s);
            }
        }
        CellSamples { dofs: self.cell_dofs[cell].clone(), samples }
    }
}

#[cfg(test)]
mod tests;
