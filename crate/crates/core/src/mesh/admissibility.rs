use super::Mesh;
use crate::error::{HdmError, Result};
use crate::scalar::{add, cross, dist, dot, scale, sub, Real};

/// Per-face verdicts of the Δ-adapted (orthogonality) and super-admissible
/// (center line through the face midpoint) conditions.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport<T> {
    pub admissible: bool,
    pub super_admissible: bool,
    /// `d_σ`: sum of the center distances for interior faces, the single
    /// center distance for boundary faces.
    pub d_sigma: Vec<T>,
    pub orthogonality_violations: Vec<usize>,
    pub midpoint_violations: Vec<usize>,
}

const GEOMETRY_TOL: f64 = 1e-10;
const DEGENERATE_TOL: f64 = 1e-14;

/// Checks the center points of `mesh` against the two-point flux conditions.
///
/// Fails with [`HdmError::DegenerateFace`] when an interior face has
/// `d_σ ≤ 1e-14`: both centers sit on the face and the flux `1/d_σ` blows up.
pub fn check_delta_adapted<T: Real>(mesh: &Mesh<T>) -> Result<AdmissibilityReport<T>> {
    let tol = T::lit(GEOMETRY_TOL);
    let mut d_sigma = Vec::with_capacity(mesh.n_faces());
    let mut orthogonality_violations = Vec::new();
    let mut midpoint_violations = Vec::new();

    for (f, face) in mesh.faces.iter().enumerate() {
        let a = mesh.vertices[face.vertices[0]];
        let b = mesh.vertices[face.vertices[1]];
        let t = sub(b, a);
        let len = face.measure;
        let xk = mesh.cells[face.minus].center;
        let dk = mesh.center_face_distance(face.minus, f);
        match face.plus {
            Some(plus) => {
                let xl = mesh.cells[plus].center;
                let dl = mesh.center_face_distance(plus, f);
                let d = dk + dl;
                if d.as_f64() <= DEGENERATE_TOL {
                    return Err(HdmError::DegenerateFace { face: f, distance: d.as_f64() });
                }
                d_sigma.push(d);
                let line = sub(xl, xk);
                let orthogonal = dot(line, t).abs() <= tol * len * (dist(xk, xl) + len);
                // intersection of the center line with the face line
                let denom = cross(line, t);
                let crosses = if denom.abs() <= tol * len * len {
                    false
                } else {
                    let s = cross(sub(a, xk), t) / denom;
                    let p = add(xk, scale(s, line));
                    let u = dot(sub(p, a), t) / (len * len);
                    let inside = u >= -tol && u <= T::one() + tol;
                    if dist(p, face.midpoint) > tol * len {
                        midpoint_violations.push(f);
                    }
                    inside
                };
                if !(orthogonal && crosses) {
                    orthogonality_violations.push(f);
                    if !midpoint_violations.contains(&f) {
                        midpoint_violations.push(f);
                    }
                }
            }
            None => {
                d_sigma.push(dk);
                // foot of the perpendicular from x_K onto the face line
                let u = dot(sub(xk, a), t) / (len * len);
                if u < -tol || u > T::one() + tol {
                    orthogonality_violations.push(f);
                }
                let foot = add(a, scale(u, t));
                if dist(foot, face.midpoint) > tol * len {
                    midpoint_violations.push(f);
                }
            }
        }
    }
    midpoint_violations.sort_unstable();
    Ok(AdmissibilityReport {
        admissible: orthogonality_violations.is_empty(),
        super_admissible: orthogonality_violations.is_empty() && midpoint_violations.is_empty(),
        d_sigma,
        orthogonality_violations,
        midpoint_violations,
    })
}
