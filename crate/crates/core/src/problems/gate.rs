//! Finite-difference cross-check of the analytic source terms.

use super::Problem;
use crate::error::{HdmError, Result};
use crate::mesh::Domain;
use crate::scalar::Point;

pub const FD_STEP: f64 = 1e-3;

/// 13-point stencil for `Δ²u`.
pub fn fd_bilaplacian(p: &dyn Problem<f64>, x: Point<f64>, h: f64) -> Result<f64> {
    let u = |i: i32, j: i32| p.eval([x[0] + i as f64 * h, x[1] + j as f64 * h]).map(|v| v.u);
    let centre = 20.0 * u(0, 0)?;
    let edge = -8.0 * (u(1, 0)? + u(-1, 0)? + u(0, 1)? + u(0, -1)?);
    let diag = 2.0 * (u(1, 1)? + u(1, -1)? + u(-1, 1)? + u(-1, -1)?);
    let far = u(2, 0)? + u(-2, 0)? + u(0, 2)? + u(0, -2)?;
    Ok((centre + edge + diag + far) / h.powi(4))
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let (mut out, mut f) = (0.0, 1.0 / base as f64);
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f /= base as f64;
    }
    out
}

/// `n` interior sample points, kept 0.01 away from every boundary line and,
/// on the L-shape, outside the disc of radius `min_radius` around the corner.
pub fn gate_points(domain: Domain, n: usize, min_radius: f64) -> Vec<Point<f64>> {
    let margin = 0.01;
    let mut out = Vec::with_capacity(n);
    let mut i = 1;
    while out.len() < n {
        let (s, t) = (radical_inverse(i, 2), radical_inverse(i, 3));
        i += 1;
        match domain {
            Domain::UnitSquare => out.push([margin + (1.0 - 2.0 * margin) * s, margin + (1.0 - 2.0 * margin) * t]),
            Domain::LShape => {
                let x = [-1.0 + margin + (2.0 - 2.0 * margin) * s, -1.0 + margin + (2.0 - 2.0 * margin) * t];
                let removed = x[0] > -margin && x[1] < margin;
                if !removed && x[0].hypot(x[1]) > min_radius {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Largest deviation of `f` from the finite-difference bilaplacian over the
/// sample points, relative to the largest `|f|` seen. Fails with
/// `InconsistentProblem` above `tol`.
pub fn fd_gate(p: &dyn Problem<f64>, points: &[Point<f64>], tol: f64) -> Result<f64> {
    let mut values = Vec::with_capacity(points.len());
    for &x in points {
        values.push((x, p.source(x)?, fd_bilaplacian(p, x, FD_STEP)?));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.1.abs())).max(f64::MIN_POSITIVE);
    let mut worst = (0.0, [0.0, 0.0]);
    for &(x, f, fd) in &values {
        let e = (f - fd).abs() / scale;
        if e > worst.0 {
            worst = (e, x);
        }
    }
    if worst.0 > tol {
        return Err(HdmError::InconsistentProblem {
            problem: p.id().to_string(),
            x: worst.1[0],
            y: worst.1[1],
            error: worst.0,
        });
    }
    Ok(worst.0)
}
