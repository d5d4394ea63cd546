use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::hdm::{cell_quadrature, Jet};
use crate::mesh::{generate_square_rectangular, generate_square_triangular, CenterRule};
use crate::scalar::{dot, frobenius, mat_sub};

fn functional_on(f: &Functional<f64>, jet: &dyn Fn(Point<f64>) -> Jet<f64>) -> f64 {
    match *f {
        Functional::Value(p) => jet(p).value,
        Functional::Derivative(p, d) => dot(jet(p).grad, d),
    }
}

/// Local interpolation on one cell, ignoring boundary constraints.
fn local_reconstruction(ops: &FemOps<'_, f64>, cell: usize, jet: &dyn Fn(Point<f64>) -> Jet<f64>, x: Point<f64>) -> BasisSample<f64> {
    let coeffs: Vec<f64> = ops.functionals(cell).iter().map(|f| functional_on(f, jet)).collect();
    let s = ops.sample_cell(cell, &[x]);
    let mut out = BasisSample::zero();
    for (c, b) in coeffs.iter().zip(s.at(0)) {
        out.value += c * b.value;
        for i in 0..2 {
            out.grad[i] += c * b.grad[i];
            for j in 0..2 {
                out.hess[i][j] += c * b.hess[i][j];
            }
        }
    }
    out
}

fn random_point_in(mesh: &Mesh<f64>, cell: usize, rng: &mut ChaCha8Rng) -> Point<f64> {
    let v: Vec<Point<f64>> = mesh.cells[cell].vertices.iter().map(|&i| mesh.vertices[i]).collect();
    if v.len() == 3 {
        let (mut a, mut b): (f64, f64) = (rng.gen(), rng.gen());
        if a + b > 1.0 {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        [v[0][0] + a * (v[1][0] - v[0][0]) + b * (v[2][0] - v[0][0]), v[0][1] + a * (v[1][1] - v[0][1]) + b * (v[2][1] - v[0][1])]
    } else {
        let [x0, y0, x1, y1] = mesh.axis_rectangle(&mesh.cells[cell]).unwrap();
        [x0 + rng.gen::<f64>() * (x1 - x0), y0 + rng.gen::<f64>() * (y1 - y0)]
    }
}

fn reference_triangle() -> Mesh<f64> {
    Mesh::from_cells(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![vec![0, 1, 2]], CenterRule::MassCenter)
}

#[test]
fn morley_dof_matrix_is_identity() {
    let mesh = generate_square_triangular::<f64>(2, CenterRule::MassCenter);
    let ops = morley_ops(&mesh, BTensor::Identity).unwrap();
    for k in 0..mesh.n_cells() {
        assert!(ops.dof_matrix(k).max_abs_diff(&DenseMatrix::identity(6)) < 1e-12);
    }
}

#[test]
fn morley_vertex_basis_on_reference_triangle() {
    let mesh = reference_triangle();
    let ops = morley_ops(&mesh, BTensor::Identity).unwrap();
    let a = ops.cell_dofs(0).iter().position(|&d| d == 0).unwrap();
    let mids: Vec<Point<f64>> = mesh.faces.iter().map(|f| f.midpoint).collect();
    let at_vertices = ops.sample_cell(0, &mesh.vertices);
    for (i, _) in mesh.vertices.iter().enumerate() {
        let expect = if i == 0 { 1.0 } else { 0.0 };
        assert!((at_vertices.at(i)[a].value - expect).abs() < 1e-14);
    }
    let at_mids = ops.sample_cell(0, &mids);
    for (i, f) in mesh.faces.iter().enumerate() {
        assert!(dot(at_mids.at(i)[a].grad, f.normal).abs() < 1e-14);
    }
}

#[test]
fn morley_reproduces_x_squared_hessian() {
    let mesh = Mesh::from_cells(vec![[0.1, 0.2], [0.9, 0.3], [0.4, 0.8]], vec![vec![0, 1, 2]], CenterRule::MassCenter);
    let ops = morley_ops(&mesh, BTensor::Identity).unwrap();
    let jet = |x: Point<f64>| Jet { value: x[0] * x[0], grad: [2.0 * x[0], 0.0], hess: [[2.0, 0.0], [0.0, 0.0]] };
    let r = local_reconstruction(&ops, 0, &jet, mesh.cells[0].mass_center);
    let d = mat_sub(r.hess, [[2.0, 0.0], [0.0, 0.0]]);
    assert!(frobenius(&d, &d).sqrt() < 1e-12);
}

#[test]
fn morley_reproduces_quadratics_at_random_points() {
    let mesh = generate_square_triangular::<f64>(1, CenterRule::MassCenter);
    let ops = morley_ops(&mesh, BTensor::Identity).unwrap();
    let q = |x: Point<f64>| Jet {
        value: 1.0 - 2.0 * x[0] + 0.5 * x[1] + 3.0 * x[0] * x[0] - x[0] * x[1] + 2.0 * x[1] * x[1],
        grad: [-2.0 + 6.0 * x[0] - x[1], 0.5 - x[0] + 4.0 * x[1]],
        hess: [[6.0, -1.0], [-1.0, 4.0]],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..mesh.n_cells() {
        for _ in 0..6 {
            let x = random_point_in(&mesh, k, &mut rng);
            assert!((local_reconstruction(&ops, k, &q, x).value - q(x).value).abs() < 1e-12);
        }
    }
}

#[test]
fn level_zero_morley_has_five_free_dofs() {
    let mesh = generate_square_triangular::<f64>(0, CenterRule::MassCenter);
    let ops = morley_ops(&mesh, BTensor::Identity).unwrap();
    assert_eq!(ops.constrained().iter().filter(|&&c| !c).count(), 5);
}

#[test]
fn morley_cell_mean_hessian_matches_exact() {
    let mesh = generate_square_triangular::<f64>(2, CenterRule::MassCenter);
    let ops = morley_ops(&mesh, BTensor::Identity).unwrap();
    let p = crate::problems::problem_sq_sin2::<f64>();
    use crate::problems::Problem;
    let dofs = morley_interpolant(&ops, |x| p.jet(x), EdgeDof::Mean).unwrap();
    for k in 0..mesh.n_cells() {
        let (pts, w) = cell_quadrature(&mesh, k, 8).unwrap();
        let s = ops.sample_cell(k, &pts);
        let mut diff = [[0.0; 2]; 2];
        for (q, &wq) in w.iter().enumerate() {
            let h = s.combine(q, &dofs).hess;
            let e = p.jet(pts[q]).unwrap().hess;
            for i in 0..2 {
                for j in 0..2 {
                    diff[i][j] += wq * (h[i][j] - e[i][j]);
                }
            }
        }
        assert!(frobenius(&diff, &diff).sqrt() <= 1e-8 * mesh.cells[k].measure, "cell {k}: {diff:?}");
    }
}

#[test]
fn adini_dof_matrix_is_identity() {
    let mesh = generate_square_rectangular::<f64>(2);
    let ops = adini_ops(&mesh, BTensor::Identity).unwrap();
    for k in 0..mesh.n_cells() {
        assert!(ops.dof_matrix(k).max_abs_diff(&DenseMatrix::identity(12)) < 1e-12);
    }
}

#[test]
fn adini_reproduces_cubics() {
    let mesh = generate_square_rectangular::<f64>(1);
    let ops = adini_ops(&mesh, BTensor::Identity).unwrap();
    let q = |x: Point<f64>| Jet {
        value: x[0].powi(3) + x[0] * x[1].powi(3) - 2.0 * x[0] * x[1],
        grad: [3.0 * x[0] * x[0] + x[1].powi(3) - 2.0 * x[1], 3.0 * x[0] * x[1] * x[1] - 2.0 * x[0]],
        hess: [[6.0 * x[0], 3.0 * x[1] * x[1] - 2.0], [3.0 * x[1] * x[1] - 2.0, 6.0 * x[0] * x[1]]],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..mesh.n_cells() {
        for _ in 0..12 {
            let x = random_point_in(&mesh, k, &mut rng);
            let r = local_reconstruction(&ops, k, &q, x);
            assert!((r.value - q(x).value).abs() < 1e-11);
            let d = mat_sub(r.hess, q(x).hess);
            assert!(frobenius(&d, &d).sqrt() < 1e-10);
        }
    }
}

#[test]
fn element_and_mesh_must_match() {
    let tri = generate_square_triangular::<f64>(1, CenterRule::MassCenter);
    let rect = generate_square_rectangular::<f64>(1);
    assert!(matches!(adini_ops(&tri, BTensor::Identity), Err(HdmError::NotRectangular(0))));
    assert!(matches!(morley_ops(&rect, BTensor::Identity), Err(HdmError::NotTriangular(0))));
}

#[test]
fn trace_variant_samples_laplacian() {
    let mesh = generate_square_triangular::<f64>(1, CenterRule::MassCenter);
    let plain = morley_ops(&mesh, BTensor::Identity).unwrap();
    let lap = morley_ops(&mesh, BTensor::TraceLaplacian).unwrap();
    let x = [mesh.cells[3].mass_center];
    for (a, b) in plain.sample_cell(3, &x).samples.iter().zip(&lap.sample_cell(3, &x).samples) {
        let t = a.hess[0][0] + a.hess[1][1];
        assert!((frobenius(&b.hess, &b.hess) - t * t).abs() < 1e-9 * (1.0 + t * t));
    }
}
