//! Polytopal meshes of planar domains.
//!
//! A [`Mesh`] stores vertices, cells (counter-clockwise vertex cycles with
//! their center point `x_K`), and faces shared by at most two cells. Every
//! face carries a fixed unit normal `n_σ` pointing out of its lower-indexed
//! cell `K⁻`; the outward normal of any other adjacent cell is `-n_σ`.

mod admissibility;
mod generate;
pub mod io;

pub use admissibility::{check_delta_adapted, AdmissibilityReport};
pub use generate::{
    generate_lshape_diagonal, generate_lshape_triangular, generate_square_diagonal, generate_square_grid, generate_square_rectangular, generate_square_triangular,
};

use crate::error::{HdmError, Result};
use crate::scalar::{cross, dist, dot, norm, scale, sub, Point, Real};

use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    UnitSquare,
    LShape,
}

impl Domain {
    pub fn area<T: Real>(self) -> T {
        match self {
            Domain::UnitSquare => T::one(),
            Domain::LShape => T::lit(3.0),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitSquare => f.write_str("unit-square"),
            Domain::LShape => f.write_str("L-shape"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Criss-cross triangles: each grid square split by both diagonals.
    Triangle,
    /// Each grid square split by one diagonal.
    DiagonalTriangle,
    Rectangle,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementKind::Triangle => f.write_str("triangles"),
            ElementKind::DiagonalTriangle => f.write_str("diagonal triangles"),
            ElementKind::Rectangle => f.write_str("rectangles"),
        }
    }
}

/// How the cell point `x_K` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CenterRule {
    Circumcenter,
    MassCenter,
}

/// A structured refinement family: one mesh per refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeshFamily {
    pub domain: Domain,
    pub element: ElementKind,
    pub center: CenterRule,
    /// Move centers lying on `∂K` strictly inside the cell.
    pub strict_centers: bool,
}

impl MeshFamily {
    pub fn new(domain: Domain, element: ElementKind, center: CenterRule) -> Self {
        Self { domain, element, center, strict_centers: false }
    }

    pub fn strict(mut self) -> Self {
        self.strict_centers = true;
        self
    }

    pub fn build<T: Real>(&self, level: u32) -> Result<Mesh<T>> {
        let mesh = match (self.domain, self.element) {
            (Domain::UnitSquare, ElementKind::Triangle) => {
                generate_square_triangular(level, self.center)
            }
            (Domain::UnitSquare, ElementKind::Rectangle) => generate_square_rectangular(level),
            (Domain::LShape, ElementKind::Triangle) => generate_lshape_triangular(level, self.center),
            (Domain::UnitSquare, ElementKind::DiagonalTriangle) => generate_square_diagonal(level, self.center),
            (Domain::LShape, ElementKind::DiagonalTriangle) => generate_lshape_diagonal(level, self.center),
            (Domain::LShape, ElementKind::Rectangle) => {
                return Err(HdmError::IncompatibleSchemeMesh {
                    scheme: "rectangular generator".into(),
                    mesh: "L-shape".into(),
                })
            }
        };
        Ok(if self.strict_centers { mesh.with_strict_centers() } else { mesh })
    }
}

#[derive(Debug, Clone)]
pub struct Cell<T> {
    /// Counter-clockwise vertex cycle.
    pub vertices: Vec<usize>,
    /// `faces[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub faces: Vec<usize>,
    /// The point `x_K` used by finite volume fluxes.
    pub center: Point<T>,
    pub mass_center: Point<T>,
    pub measure: T,
    pub diameter: T,
    /// Radius of the largest ball centred at the mass center inside the cell.
    pub inradius: T,
}

#[derive(Debug, Clone)]
pub struct Face<T> {
    pub vertices: [usize; 2],
    pub measure: T,
    pub midpoint: Point<T>,
    /// Unit normal oriented out of `minus`.
    pub normal: Point<T>,
    pub minus: usize,
    pub plus: Option<usize>,
}

impl<T> Face<T> {
    pub fn is_boundary(&self) -> bool {
        self.plus.is_none()
    }

    /// The cell across the face from `cell`, if any.
    pub fn neighbor(&self, cell: usize) -> Option<usize> {
        if cell == self.minus {
            self.plus
        } else {
            Some(self.minus)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Mesh<T> {
    pub vertices: Vec<Point<T>>,
    pub cells: Vec<Cell<T>>,
    pub faces: Vec<Face<T>>,
    pub boundary_vertex: Vec<bool>,
}

impl<T: Real> Mesh<T> {
    /// Builds the face structure from vertex cycles. Cycles given clockwise
    /// are reversed. Centers follow `rule`; `Circumcenter` is only distinct
    /// from the mass center for triangles.
    pub fn from_cells(vertices: Vec<Point<T>>, cycles: Vec<Vec<usize>>, rule: CenterRule) -> Self {
        let centers = cycles
            .iter()
            .map(|cyc| {
                let pts: Vec<_> = cyc.iter().map(|&v| vertices[v]).collect();
                match (rule, pts.len()) {
                    (CenterRule::Circumcenter, 3) => circumcenter(pts[0], pts[1], pts[2]),
                    _ => polygon_mass_center(&pts).1,
                }
            })
            .collect();
        Self::with_centers(vertices, cycles, centers)
    }

    pub fn with_centers(
        vertices: Vec<Point<T>>,
        mut cycles: Vec<Vec<usize>>,
        centers: Vec<Point<T>>,
    ) -> Self {
        assert_eq!(cycles.len(), centers.len());
        let mut faces: Vec<Face<T>> = Vec::new();
        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cells = Vec::with_capacity(cycles.len());

        for (k, (cyc, center)) in cycles.iter_mut().zip(centers).enumerate() {
            let pts: Vec<_> = cyc.iter().map(|&v| vertices[v]).collect();
            let (area, _) = polygon_mass_center(&pts);
            if area < T::zero() {
                cyc.reverse();
            }
            let pts: Vec<_> = cyc.iter().map(|&v| vertices[v]).collect();
            let (measure, mass_center) = polygon_mass_center(&pts);
            let n = cyc.len();
            let mut cell_faces = Vec::with_capacity(n);
            let mut diameter = T::zero();
            let mut inradius = T::infinity();
            for i in 0..n {
                let (a, b) = (cyc[i], cyc[(i + 1) % n]);
                for &p in &pts {
                    diameter = diameter.max(dist(p, pts[i]));
                }
                let (pa, pb) = (vertices[a], vertices[b]);
                let key = (a.min(b), a.max(b));
                let f = *edge_index.entry(key).or_insert_with(|| {
                    let t = sub(pb, pa);
                    let len = norm(t);
                    faces.push(Face {
                        vertices: [a, b],
                        measure: len,
                        midpoint: [(pa[0] + pb[0]) * T::lit(0.5), (pa[1] + pb[1]) * T::lit(0.5)],
                        normal: [t[1] / len, -t[0] / len],
                        minus: k,
                        plus: None,
                    });
                    faces.len() - 1
                });
                if faces[f].minus != k {
                    faces[f].plus = Some(k);
                }
                let t = sub(pb, pa);
                inradius = inradius.min(cross(t, sub(mass_center, pa)).abs() / norm(t));
                cell_faces.push(f);
            }
            cells.push(Cell {
                vertices: cyc.clone(),
                faces: cell_faces,
                center,
                mass_center,
                measure,
                diameter,
                inradius,
            });
        }

        let mut boundary_vertex = vec![false; vertices.len()];
        for f in faces.iter().filter(|f| f.is_boundary()) {
            boundary_vertex[f.vertices[0]] = true;
            boundary_vertex[f.vertices[1]] = true;
        }
        Mesh { vertices, cells, faces, boundary_vertex }
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Mesh size `h = max h_K`.
    pub fn h(&self) -> T {
        self.cells.iter().fold(T::zero(), |h, c| h.max(c.diameter))
    }

    pub fn area(&self) -> T {
        self.cells.iter().map(|c| c.measure).sum()
    }

    /// `max h_K / ρ_K` over the cells.
    pub fn regularity(&self) -> T {
        self.cells.iter().fold(T::zero(), |r, c| r.max(c.diameter / c.inradius))
    }

    /// `+1` if `cell` is the owner `K⁻` of `face`, `-1` otherwise.
    pub fn face_sign(&self, cell: usize, face: usize) -> T {
        if self.faces[face].minus == cell {
            T::one()
        } else {
            -T::one()
        }
    }

    /// Outward unit normal `n_{K,σ}`.
    pub fn outward_normal(&self, cell: usize, face: usize) -> Point<T> {
        scale(self.face_sign(cell, face), self.faces[face].normal)
    }

    /// A cell touches `∂Ω` when any of its vertices lies on the boundary.
    pub fn touches_boundary(&self, cell: usize) -> bool {
        self.cells[cell].vertices.iter().any(|&v| self.boundary_vertex[v])
    }

    pub fn is_triangular(&self) -> bool {
        self.cells.iter().all(|c| c.vertices.len() == 3)
    }

    /// Every cell is a rectangle with edges parallel to the axes.
    pub fn is_axis_rectangular(&self) -> bool {
        self.cells.iter().all(|c| self.axis_rectangle(c).is_some())
    }

    /// `(x_min, y_min, x_max, y_max)` when the cell is an axis-aligned rectangle.
    pub fn axis_rectangle(&self, cell: &Cell<T>) -> Option<[T; 4]> {
        if cell.vertices.len() != 4 {
            return None;
        }
        let tol = T::lit(1e-12) * cell.diameter;
        let pts: Vec<_> = cell.vertices.iter().map(|&v| self.vertices[v]).collect();
        for i in 0..4 {
            let t = sub(pts[(i + 1) % 4], pts[i]);
            if t[0].abs() > tol && t[1].abs() > tol {
                return None;
            }
        }
        let lo = pts.iter().fold([T::infinity(); 2], |m, p| [m[0].min(p[0]), m[1].min(p[1])]);
        let hi = pts.iter().fold([T::neg_infinity(); 2], |m, p| [m[0].max(p[0]), m[1].max(p[1])]);
        Some([lo[0], lo[1], hi[0], hi[1]])
    }

    /// Orthogonal distance from `x_K` to the line carrying `face`.
    pub fn center_face_distance(&self, cell: usize, face: usize) -> T {
        let f = &self.faces[face];
        dot(sub(f.midpoint, self.cells[cell].center), f.normal).abs()
    }

    /// Total edge length with every face counted once.
    pub fn total_face_length(&self) -> T {
        self.faces.iter().map(|f| f.measure).sum()
    }

    /// Copy of the mesh in which every center lying on its cell boundary is
    /// pushed inward by `1e-3 h_K` along the inward normal of that face.
    pub fn with_strict_centers(&self) -> Self {
        let mut mesh = self.clone();
        for (k, cell) in mesh.cells.iter_mut().enumerate() {
            let tol = T::lit(1e-12) * cell.diameter;
            for &f in &cell.faces {
                let face = &self.faces[f];
                let n = scale(self.face_sign(k, f), face.normal);
                if dot(sub(face.midpoint, cell.center), n).abs() <= tol {
                    let eps = T::lit(1e-3) * cell.diameter;
                    cell.center = sub(cell.center, scale(eps, n));
                }
            }
        }
        mesh
    }
}

/// Signed area and mass center of a simple polygon.
pub(crate) fn polygon_mass_center<T: Real>(pts: &[Point<T>]) -> (T, Point<T>) {
    let n = pts.len();
    let origin = pts[0];
    let mut area = T::zero();
    let mut c = [T::zero(); 2];
    for i in 0..n {
        let p = sub(pts[i], origin);
        let q = sub(pts[(i + 1) % n], origin);
        let w = cross(p, q);
        area += w;
        c[0] += (p[0] + q[0]) * w;
        c[1] += (p[1] + q[1]) * w;
    }
    let area = area * T::lit(0.5);
    let s = T::one() / (T::lit(6.0) * area);
    (area, [origin[0] + c[0] * s, origin[1] + c[1] * s])
}

pub(crate) fn circumcenter<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> Point<T> {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let d = T::lit(2.0) * cross(ab, ac);
    let ab2 = dot(ab, ab);
    let ac2 = dot(ac, ac);
    [
        a[0] + (ac[1] * ab2 - ab[1] * ac2) / d,
        a[1] + (ab[0] * ac2 - ac[0] * ab2) / d,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_families() -> Vec<(MeshFamily, f64)> {
        vec![
            (MeshFamily::new(Domain::UnitSquare, ElementKind::Triangle, CenterRule::Circumcenter), 1.0),
            (MeshFamily::new(Domain::UnitSquare, ElementKind::Triangle, CenterRule::MassCenter), 1.0),
            (MeshFamily::new(Domain::UnitSquare, ElementKind::Rectangle, CenterRule::MassCenter), 1.0),
            (MeshFamily::new(Domain::LShape, ElementKind::Triangle, CenterRule::Circumcenter), 3.0),
            (MeshFamily::new(Domain::UnitSquare, ElementKind::DiagonalTriangle, CenterRule::MassCenter), 1.0),
            (MeshFamily::new(Domain::LShape, ElementKind::DiagonalTriangle, CenterRule::MassCenter), 3.0),
        ]
    }

    #[test]
    fn cells_partition_the_domain() {
        for (family, area) in all_families() {
            for level in 0..5 {
                let mesh: Mesh<f64> = family.build(level).unwrap();
                assert!((mesh.area() - area).abs() <= 1e-12, "{family:?} level {level}");
            }
        }
    }

    #[test]
    fn stokes_identity_per_cell() {
        for (family, _) in all_families() {
            for level in 0..5 {
                let mesh: Mesh<f64> = family.build(level).unwrap();
                for (k, cell) in mesh.cells.iter().enumerate() {
                    let mut s = [0.0; 2];
                    let mut perimeter = 0.0;
                    for &f in &cell.faces {
                        let n = mesh.outward_normal(k, f);
                        let m = mesh.faces[f].measure;
                        s[0] += m * n[0];
                        s[1] += m * n[1];
                        perimeter += m;
                    }
                    assert!(s[0].abs() <= 1e-12 * perimeter && s[1].abs() <= 1e-12 * perimeter);
                }
            }
        }
    }

    #[test]
    fn face_adjacency_and_normals() {
        for (family, _) in all_families() {
            let mesh: Mesh<f64> = family.build(2).unwrap();
            let mut incidence = vec![0usize; mesh.n_faces()];
            for cell in &mesh.cells {
                for &f in &cell.faces {
                    incidence[f] += 1;
                }
            }
            for (f, face) in mesh.faces.iter().enumerate() {
                match face.plus {
                    Some(plus) => {
                        assert_eq!(incidence[f], 2);
                        assert!(face.minus < plus);
                        let a = mesh.outward_normal(face.minus, f);
                        let b = mesh.outward_normal(plus, f);
                        assert!((a[0] + b[0]).abs() < 1e-15 && (a[1] + b[1]).abs() < 1e-15);
                        // the normal leaves K⁻: it points from its mass center toward the face
                        let c = mesh.cells[face.minus].mass_center;
                        assert!(dot(sub(face.midpoint, c), face.normal) > 0.0);
                    }
                    None => assert_eq!(incidence[f], 1),
                }
            }
        }
    }

    #[test]
    fn refinement_halves_h_and_regularity_is_bounded() {
        for (family, _) in all_families() {
            let bound = match family.element {
                ElementKind::Triangle | ElementKind::DiagonalTriangle => 6.0 + 1e-9,
                ElementKind::Rectangle => 2.9,
            };
            let mut prev: Option<f64> = None;
            for level in 0..6 {
                let mesh: Mesh<f64> = family.build(level).unwrap();
                let h = mesh.h();
                if let Some(p) = prev {
                    assert!((h - p / 2.0).abs() <= 1e-15);
                }
                assert!(mesh.regularity() <= bound, "{}", mesh.regularity());
                prev = Some(h);
            }
        }
    }

    #[test]
    fn face_lengths_match_vertex_geometry() {
        for (family, _) in all_families() {
            let mesh: Mesh<f64> = family.build(3).unwrap();
            let mut edges = std::collections::BTreeSet::new();
            for cell in &mesh.cells {
                let n = cell.vertices.len();
                for i in 0..n {
                    let (a, b) = (cell.vertices[i], cell.vertices[(i + 1) % n]);
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            let independent: f64 =
                edges.iter().map(|&(a, b)| dist(mesh.vertices[a], mesh.vertices[b])).sum();
            assert!((independent - mesh.total_face_length()).abs() <= 1e-12 * independent);
        }
    }

    #[test]
    fn circumcenter_is_equidistant() {
        let c = circumcenter::<f64>([0.0, 0.0], [1.0, 0.2], [0.3, 0.9]);
        let r: f64 = dist(c, [0.0, 0.0]);
        assert!((dist(c, [1.0, 0.2]) - r).abs() < 1e-15);
        assert!((dist(c, [0.3, 0.9]) - r).abs() < 1e-15);
    }

    #[test]
    fn strict_centers_lie_inside_their_cells() {
        let mesh: Mesh<f64> = generate_square_triangular(2, CenterRule::Circumcenter);
        let strict = mesh.with_strict_centers();
        for (k, cell) in strict.cells.iter().enumerate() {
            for &f in &cell.faces {
                assert!(strict.center_face_distance(k, f) > 0.0);
            }
        }
    }
}
