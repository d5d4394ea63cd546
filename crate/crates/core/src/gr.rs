//! Gradient-recovery Hessian discretisation on continuous P1 elements:
//! `∇_D u = Q_h∇u` and `H_D^B u = B[∇(Q_h∇u) + 𝔖_h ⊗ (Q_h∇u − ∇u)]`, where
//! `Q_h` averages the cell gradients around each interior vertex and vanishes
//! on `∂Ω`. A cell weighs in with its area, except that the shares of its
//! boundary vertices are handed to its interior vertices: a cell with `n`
//! boundary vertices counts `3|K| / (3 − n)` at each interior one. Plain area
//! weights would leave `Q_h∇` blind to every P1 function whose cell means all
//! vanish against the interior hat gradients, a kernel that exists on uniform
//! meshes and is excited by any load with nonzero mean.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{HdmError, Result};
use crate::hdm::{BTensor, BasisSample, CellSamples, Degrees, Discretisation};
use crate::mesh::Mesh;
use crate::scalar::{add, cross, dot, mat_add, outer, scale, sub, Mat2, Point, Real};

/// Shape of the stabilisation field `𝔖_h` on a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stabilisation {
    /// `2ρ (Σλ_i² − 1/2) e` with `e = (1,1)/√2`. The scalar factor is
    /// L²(K)-orthogonal to P1 and reaches its maximum modulus 1 at the vertices.
    #[default]
    Orthogonal,
    /// `ρ e`
    Constant,
    /// `(ρ / h_K) e`
    InverseMeshSize,
}

impl std::str::FromStr for Stabilisation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "orthogonal" => Ok(Self::Orthogonal),
            "constant" => Ok(Self::Constant),
            "inverse-h" => Ok(Self::InverseMeshSize),
            other => Err(format!("unknown stabilisation `{other}` (expected orthogonal, constant or inverse-h)")),
        }
    }
}

#[derive(Debug, Clone)]
struct CellData<T> {
    /// `∇λ_i`
    grad_lambda: [Point<T>; 3],
    centroid: Point<T>,
    dofs: Vec<usize>,
    /// `own[i]`: position of vertex i in `dofs`.
    own: [usize; 3],
    /// `recovery[i][a]`: coefficient of local dof a in `Q_h∇u` at vertex i.
    recovery: [Vec<Point<T>>; 3],
}

pub struct GrOps<'m, T> {
    mesh: &'m Mesh<T>,
    b: BTensor,
    rho: T,
    stabilisation: Stabilisation,
    cells: Vec<CellData<T>>,
}

fn barycentric_gradients<T: Real>(p: [Point<T>; 3]) -> [Point<T>; 3] {
    let area2 = cross(sub(p[1], p[0]), sub(p[2], p[0]));
    // ∇λ_i = rot(p_{i+2} − p_{i+1}) / 2|K|
    let g = |i: usize| {
        let e = sub(p[(i + 2) % 3], p[(i + 1) % 3]);
        [-e[1] / area2, e[0] / area2]
    };
    [g(0), g(1), g(2)]
}

/// Area-weighted average of the cell gradients of the P1 function `u` at every
/// vertex, boundary vertices included.
pub fn averaged_vertex_gradients<T: Real>(mesh: &Mesh<T>, u: &[T]) -> Vec<Point<T>> {
    let mut sum = vec![[T::zero(); 2]; mesh.n_vertices()];
    let mut weight = vec![T::zero(); mesh.n_vertices()];
    for c in &mesh.cells {
        let p = [0, 1, 2].map(|i| mesh.vertices[c.vertices[i]]);
        let g = barycentric_gradients(p);
        let grad = (0..3).fold([T::zero(); 2], |acc, i| add(acc, scale(u[c.vertices[i]], g[i])));
        for &v in &c.vertices {
            sum[v] = add(sum[v], scale(c.measure, grad));
            weight[v] += c.measure;
        }
    }
    sum.iter().zip(&weight).map(|(s, &w)| scale(T::one() / w, *s)).collect()
}

pub fn gr_ops<T: Real>(mesh: &Mesh<T>, b: BTensor, rho: T) -> Result<GrOps<'_, T>> {
    gr_ops_with(mesh, b, rho, Stabilisation::default())
}

pub fn gr_ops_with<T: Real>(mesh: &Mesh<T>, b: BTensor, rho: T, stabilisation: Stabilisation) -> Result<GrOps<'_, T>> {
    if !(rho > T::zero() && rho.is_finite()) {
        return Err(HdmError::InvalidRho(rho.as_f64()));
    }
    if let Some(k) = mesh.cells.iter().position(|c| c.vertices.len() != 3) {
        return Err(HdmError::NotTriangular(k));
    }
    let geometry: Vec<[Point<T>; 3]> = mesh
        .cells
        .iter()
        .map(|c| barycentric_gradients([0, 1, 2].map(|i| mesh.vertices[c.vertices[i]])))
        .collect();
    // Q_h at vertex v as a combination of vertex values
    let mut patches: Vec<BTreeMap<usize, Point<T>>> = vec![BTreeMap::new(); mesh.n_vertices()];
    let mut weight = vec![T::zero(); mesh.n_vertices()];
    for (k, c) in mesh.cells.iter().enumerate() {
        let nb = c.vertices.iter().filter(|&&v| mesh.boundary_vertex[v]).count();
        if nb == 3 {
            continue;
        }
        let w = c.measure * T::lit(3.0) / T::from_usize_lossy(3 - nb);
        for &v in &c.vertices {
            if mesh.boundary_vertex[v] {
                continue;
            }
            weight[v] += w;
            for (i, &u) in c.vertices.iter().enumerate() {
                let e = patches[v].entry(u).or_insert([T::zero(); 2]);
                *e = add(*e, scale(w, geometry[k][i]));
            }
        }
    }
    for (v, patch) in patches.iter_mut().enumerate() {
        for q in patch.values_mut() {
            *q = scale(T::one() / weight[v], *q);
        }
    }
    let cells = mesh
        .cells
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let mut dofs: Vec<usize> = c.vertices.clone();
            for &v in &c.vertices {
                dofs.extend(patches[v].keys().copied());
            }
            dofs.sort_unstable();
            dofs.dedup();
            let pos = |d: usize| dofs.binary_search(&d).unwrap();
            let own = [0, 1, 2].map(|i| pos(c.vertices[i]));
            let recovery = [0, 1, 2].map(|i| {
                let mut row = vec![[T::zero(); 2]; dofs.len()];
                for (&u, &q) in &patches[c.vertices[i]] {
                    row[pos(u)] = q;
                }
                row
            });
            let centroid = scale(T::one() / T::lit(3.0), c.vertices.iter().fold([T::zero(); 2], |a, &v| add(a, mesh.vertices[v])));
            CellData { grad_lambda: geometry[k], centroid, dofs, own, recovery }
        })
        .collect();
    Ok(GrOps { mesh, b, rho, stabilisation, cells })
}

impl<'m, T: Real> GrOps<'m, T> {
    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn stabilisation(&self) -> Stabilisation {
        self.stabilisation
    }

    /// `Q_h∇u` at every vertex.
    pub fn recovered_gradient(&self, u: &[T]) -> Vec<Point<T>> {
        let mut out = vec![[T::zero(); 2]; self.mesh.n_vertices()];
        for (c, data) in self.mesh.cells.iter().zip(&self.cells) {
            for (i, &v) in c.vertices.iter().enumerate() {
                out[v] = data.recovery[i].iter().zip(&data.dofs).fold([T::zero(); 2], |acc, (q, &d)| add(acc, scale(u[d], *q)));
            }
        }
        out
    }

    /// `𝔖_h` at a point of `cell` with barycentric coordinates `lambda`.
    fn stabilisation_field(&self, cell: usize, lambda: [T; 3]) -> Point<T> {
        let e = T::one() / T::SQRT_2();
        let magnitude = match self.stabilisation {
            Stabilisation::Orthogonal => {
                let s = lambda.iter().map(|&l| l * l).sum::<T>() - T::lit(0.5);
                self.rho * T::lit(2.0) * s
            }
            Stabilisation::Constant => self.rho,
            Stabilisation::InverseMeshSize => self.rho / self.mesh.cells[cell].diameter,
        };
        [magnitude * e, magnitude * e]
    }
}

impl<'m, T: Real> Discretisation<T> for GrOps<'m, T> {
    fn name(&self) -> &str {
        "gr"
    }

    fn mesh(&self) -> &Mesh<T> {
        self.mesh
    }

    fn btensor(&self) -> BTensor {
        self.b
    }

    fn degrees(&self) -> Degrees {
        Degrees { gram: 6, mass: 2, rhs: 4, error: 6 }
    }

    fn n_dofs(&self) -> usize {
        self.mesh.n_vertices()
    }

    fn constrained(&self) -> &[bool] {
        &self.mesh.boundary_vertex
    }

    fn sample_cell(&self, cell: usize, points: &[Point<T>]) -> CellSamples<T> {
        let data = &self.cells[cell];
        let n = data.dofs.len();
        let third = T::one() / T::lit(3.0);
        // ∇(Q_h∇φ_a) = Σ_i q_{i,a} ⊗ ∇λ_i, constant on the cell
        let recovered_hessian: Vec<Mat2<T>> = (0..n)
            .map(|a| (0..3).fold([[T::zero(); 2]; 2], |m, i| mat_add(m, outer(data.recovery[i][a], data.grad_lambda[i]))))
            .collect();
        let mut samples = Vec::with_capacity(points.len() * n);
        for &x in points {
            let offset = sub(x, data.centroid);
            let lambda = [0, 1, 2].map(|i| third + dot(data.grad_lambda[i], offset));
            let stab = self.stabilisation_field(cell, lambda);
            for a in 0..n {
                let q = (0..3).fold([T::zero(); 2], |acc, i| add(acc, scale(lambda[i], data.recovery[i][a])));
                let (mut value, mut cell_grad) = (T::zero(), [T::zero(); 2]);
                if let Some(i) = data.own.iter().position(|&o| o == a) {
                    value = lambda[i];
                    cell_grad = data.grad_lambda[i];
                }
                let rec = recovered_hessian[a];
                let full = mat_add(rec, outer(stab, sub(q, cell_grad)));
                samples.push(BasisSample { value, grad: q, hess: self.b.apply(&full), report: self.b.apply(&rec) });
            }
        }
        CellSamples { dofs: data.dofs.clone(), samples }
    }
}
