use super::{ElementType, FemOps};
use crate::error::Result;
use crate::hdm::{Discretisation, Jet};
use crate::linalg::gauss_legendre;
use crate::scalar::{dot, Point, Real};

/// How the Morley interpolant fixes an edge dof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeDof {
    /// `∇φ(m_σ)·n_σ`
    Midpoint,
    /// Mean of `∇φ·n_σ` over σ. This makes the mean of the broken Hessian
    /// over each cell equal to that of `ℋφ`.
    #[default]
    Mean,
}

/// Canonical Morley interpolant; constrained dofs are zero.
pub fn morley_interpolant<T, F>(ops: &FemOps<'_, T>, phi: F, edge: EdgeDof) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(Point<T>) -> Result<Jet<T>>,
{
    assert_eq!(ops.element(), ElementType::Morley);
    let mesh = ops.mesh();
    let nv = mesh.n_vertices();
    let constrained = ops.constrained();
    let mut out = vec![T::zero(); ops.n_dofs()];
    for (v, &p) in mesh.vertices.iter().enumerate() {
        if !constrained[v] {
            out[v] = phi(p)?.value;
        }
    }
    let (nodes, weights) = gauss_legendre::<T>(6);
    for (s, face) in mesh.faces.iter().enumerate() {
        if constrained[nv + s] {
            continue;
        }
        out[nv + s] = match edge {
            EdgeDof::Midpoint => dot(phi(face.midpoint)?.grad, face.normal),
            EdgeDof::Mean => {
                let (a, b) = (mesh.vertices[face.vertices[0]], mesh.vertices[face.vertices[1]]);
                let mut acc = T::zero();
                for (&t, &w) in nodes.iter().zip(&weights) {
                    let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                    acc += w * dot(phi(x)?.grad, face.normal);
                }
                acc
            }
        };
    }
    Ok(out)
}

/// Canonical Adini interpolant from `φ` and `∇φ` at the vertices.
pub fn adini_interpolant<T, F>(ops: &FemOps<'_, T>, phi: F) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(Point<T>) -> Result<Jet<T>>,
{
    assert_eq!(ops.element(), ElementType::Adini);
    let mesh = ops.mesh();
    let mut out = vec![T::zero(); ops.n_dofs()];
    for (v, &p) in mesh.vertices.iter().enumerate() {
        if mesh.boundary_vertex[v] {
            continue;
        }
        let j = phi(p)?;
        out[3 * v] = j.value;
        out[3 * v + 1] = j.grad[0];
        out[3 * v + 2] = j.grad[1];
    }
    Ok(out)
}
