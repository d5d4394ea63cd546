//! Hessian discretisations: the dof space with its boundary constraints and
//! the reconstructions of function, gradient and B-Hessian, cell by cell.

mod assembly;
mod btensor;
mod measures;
mod norms;

pub use assembly::{
    assemble_bilinear, assemble_functional, assemble_gram, assemble_hessian_scheme, assemble_rhs, galerkin_defect,
    solve_hessian_scheme,
    DiscreteSolution, SolveOptions,
};
pub use btensor::BTensor;
pub use measures::{coercivity_measure, consistency_measure, limit_conformity_measure, CoercivityEstimate, DualNorm};
pub use norms::{error_norms, ErrorNorms};

use crate::error::Result;
use crate::linalg::{gauss_rectangle, gauss_triangle};
use crate::mesh::Mesh;
use crate::scalar::{Mat2, Point, Real};

/// Value, gradient and Hessian of a smooth function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub grad: Point<T>,
    pub hess: Mat2<T>,
}

impl<T: Real> Jet<T> {
    pub fn zero() -> Self {
        Self { value: T::zero(), grad: [T::zero(); 2], hess: [[T::zero(); 2]; 2] }
    }
}

/// One local basis function sampled at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSample<T> {
    /// Π_D
    pub value: T,
    /// ∇_D
    pub grad: Point<T>,
    /// H_D^B, with B already applied.
    pub hess: Mat2<T>,
    /// The Hessian used when measuring the second-order error; equal to
    /// `hess` except for schemes that report a different reconstruction.
    pub report: Mat2<T>,
}

impl<T: Real> BasisSample<T> {
    pub fn zero() -> Self {
        let z = [[T::zero(); 2]; 2];
        Self { value: T::zero(), grad: [T::zero(); 2], hess: z, report: z }
    }
}

/// Basis samples of one cell at a list of points, stored point-major.
#[derive(Debug, Clone)]
pub struct CellSamples<T> {
    pub dofs: Vec<usize>,
    pub samples: Vec<BasisSample<T>>,
}

impl<T: Real> CellSamples<T> {
    pub fn n_local(&self) -> usize {
        self.dofs.len()
    }

    pub fn at(&self, point: usize) -> &[BasisSample<T>] {
        let n = self.dofs.len();
        &self.samples[point * n..(point + 1) * n]
    }

    /// Reconstruction of a global dof vector at `point`.
    pub fn combine(&self, point: usize, u: &[T]) -> BasisSample<T> {
        let mut out = BasisSample::zero();
        for (s, &dof) in self.at(point).iter().zip(&self.dofs) {
            let c = u[dof];
            if c == T::zero() {
                continue;
            }
            out.value += c * s.value;
            for i in 0..2 {
                out.grad[i] += c * s.grad[i];
                for j in 0..2 {
                    out.hess[i][j] += c * s.hess[i][j];
                    out.report[i][j] += c * s.report[i][j];
                }
            }
        }
        out
    }
}

/// Quadrature degrees a scheme needs for its products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degrees {
    pub gram: usize,
    pub mass: usize,
    pub rhs: usize,
    pub error: usize,
}

/// A Hessian discretisation `(X_{D,0}, Π_D, ∇_D, H_D^B)`.
pub trait Discretisation<T: Real>: Sync {
    fn name(&self) -> &str;
    fn mesh(&self) -> &Mesh<T>;
    fn btensor(&self) -> BTensor;
    fn degrees(&self) -> Degrees;
    /// Total number of dofs, constrained ones included.
    fn n_dofs(&self) -> usize;
    /// Dofs forced to zero by the clamped boundary conditions.
    fn constrained(&self) -> &[bool];
    /// Samples of every basis function that is nonzero on `cell`, at the given
    /// physical points of that cell.
    fn sample_cell(&self, cell: usize, points: &[Point<T>]) -> CellSamples<T>;
}

/// Numbering of the free dofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    pub free_index: Vec<Option<usize>>,
    pub free: Vec<usize>,
}

impl DofMap {
    pub fn new(constrained: &[bool]) -> Self {
        let mut free = Vec::new();
        let free_index = constrained
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c {
                    None
                } else {
                    free.push(i);
                    Some(free.len() - 1)
                }
            })
            .collect();
        Self { free_index, free }
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn expand<T: Real>(&self, reduced: &[T]) -> Vec<T> {
        let mut full = vec![T::zero(); self.free_index.len()];
        for (k, &i) in self.free.iter().enumerate() {
            full[i] = reduced[k];
        }
        full
    }

    pub fn restrict<T: Real>(&self, full: &[T]) -> Vec<T> {
        self.free.iter().map(|&i| full[i]).collect()
    }
}

/// Physical quadrature points and weights on a cell. Triangles and
/// axis-aligned rectangles use the reference rules; other polygons are split
/// into triangles around their mass center.
pub fn cell_quadrature<T: Real>(mesh: &Mesh<T>, cell: usize, degree: usize) -> Result<(Vec<Point<T>>, Vec<T>)> {
    let c = &mesh.cells[cell];
    let v = |i: usize| mesh.vertices[c.vertices[i]];
    if c.vertices.len() == 3 {
        return Ok(map_triangle(v(0), v(1), v(2), degree)?);
    }
    if let Some([x0, y0, x1, y1]) = mesh.axis_rectangle(c) {
        let rule = gauss_rectangle::<T>(degree)?;
        let (dx, dy) = (x1 - x0, y1 - y0);
        let points = rule.points.iter().map(|p| [x0 + p[0] * dx, y0 + p[1] * dy]).collect();
        let weights = rule.weights.iter().map(|&w| w * dx * dy).collect();
        return Ok((points, weights));
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let n = c.vertices.len();
    for i in 0..n {
        let (p, w) = map_triangle(c.mass_center, v(i), v((i + 1) % n), degree)?;
        points.extend(p);
        weights.extend(w);
    }
    Ok((points, weights))
}

fn map_triangle<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>, degree: usize) -> Result<(Vec<Point<T>>, Vec<T>)> {
    let rule = gauss_triangle::<T>(degree)?;
    let e1 = crate::scalar::sub(b, a);
    let e2 = crate::scalar::sub(c, a);
    let jac = crate::scalar::cross(e1, e2).abs();
    let points = rule
        .points
        .iter()
        .map(|p| [a[0] + p[0] * e1[0] + p[1] * e2[0], a[1] + p[0] * e1[1] + p[1] * e2[1]])
        .collect();
    let weights = rule.weights.iter().map(|&w| w * jac).collect();
    Ok((points, weights))
}

/// Samples on a cell at its quadrature points of the given degree.
pub fn sample_at_quadrature<T: Real, D: Discretisation<T> + ?Sized>(
    ops: &D,
    cell: usize,
    degree: usize,
) -> Result<(CellSamples<T>, Vec<Point<T>>, Vec<T>)> {
    let (points, weights) = cell_quadrature(ops.mesh(), cell, degree)?;
    let samples = ops.sample_cell(cell, &points);
    Ok((samples, points, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_square_rectangular, generate_square_triangular, CenterRule};

    #[test]
    fn quadrature_integrates_cell_measure_and_moments() {
        let tri: Mesh<f64> = generate_square_triangular(1, CenterRule::MassCenter);
        let rect: Mesh<f64> = generate_square_rectangular(2);
        for mesh in [&tri, &rect] {
            let mut total = 0.0;
            for k in 0..mesh.n_cells() {
                let (p, w) = cell_quadrature(mesh, k, 2).unwrap();
                let area: f64 = w.iter().sum();
                assert!((area - mesh.cells[k].measure).abs() < 1e-15);
                let mx: f64 = p.iter().zip(&w).map(|(p, w)| w * p[0]).sum::<f64>() / area;
                assert!((mx - mesh.cells[k].mass_center[0]).abs() < 1e-14);
                total += area;
            }
            assert!((total - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dof_map_round_trip() {
        let map = DofMap::new(&[true, false, false, true, false]);
        assert_eq!(map.n_free(), 3);
        assert_eq!(map.free_index[2], Some(1));
        let full = map.expand(&[1.0, 2.0, 3.0]);
        assert_eq!(full, vec![0.0, 1.0, 2.0, 0.0, 3.0]);
        assert_eq!(map.restrict(&full), vec![1.0, 2.0, 3.0]);
    }
}
