use crate::error::{HdmError, Result};
use crate::scalar::{Point, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceCell {
    /// `(0,0), (1,0), (0,1)`, area 1/2.
    Triangle,
    /// `[0,1]²`.
    Square,
}

/// Points in reference coordinates with weights summing to the reference measure.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub cell: ReferenceCell,
    pub degree: usize,
    pub points: Vec<Point<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest error over all monomials `ξ^i η^j` with `i + j ≤ degree`.
    pub fn exactness_defect(&self) -> T {
        let mut worst = T::zero();
        for total in 0..=self.degree {
            for i in 0..=total {
                let j = total - i;
                let approx: T = self
                    .points
                    .iter()
                    .zip(&self.weights)
                    .map(|(p, &w)| w * p[0].powi(i as i32) * p[1].powi(j as i32))
                    .sum();
                worst = worst.max((approx - monomial_integral(self.cell, i, j)).abs());
            }
        }
        worst
    }
}

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

/// Exact `∫ ξ^i η^j` over the reference cell.
pub fn monomial_integral<T: Real>(cell: ReferenceCell, i: usize, j: usize) -> T {
    match cell {
        ReferenceCell::Triangle => factorial::<T>(i) * factorial::<T>(j) / factorial::<T>(i + j + 2),
        ReferenceCell::Square => T::one() / (T::from_usize_lossy(i + 1) * T::from_usize_lossy(j + 1)),
    }
}

/// `n`-point Gauss–Legendre rule on `[0,1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = T::from_usize_lossy(n);
    for i in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess
        let guess = T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5));
        let mut x = guess.cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes.push((T::one() - x) * T::lit(0.5));
        weights.push(w * T::lit(0.5));
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

fn check_degree(degree: usize) -> Result<()> {
    if (1..=8).contains(&degree) {
        Ok(())
    } else {
        Err(HdmError::UnsupportedDegree(degree))
    }
}

/// Rule on the reference triangle exact up to `degree`: the centroid rule
/// for degree 1, a collapsed (Duffy) Gauss product otherwise.
pub fn gauss_triangle<T: Real>(degree: usize) -> Result<QuadratureRule<T>> {
    check_degree(degree)?;
    if degree == 1 {
        let third = T::one() / T::lit(3.0);
        return Ok(QuadratureRule {
            cell: ReferenceCell::Triangle,
            degree,
            points: vec![[third, third]],
            weights: vec![T::lit(0.5)],
        });
    }
    let n = (degree + 3) / 2;
    let (x, w) = gauss_legendre::<T>(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let u = x[i];
            points.push([u, x[j] * (T::one() - u)]);
            weights.push(w[i] * w[j] * (T::one() - u));
        }
    }
    Ok(QuadratureRule { cell: ReferenceCell::Triangle, degree, points, weights })
}

/// Tensor Gauss rule on `[0,1]²` exact up to total `degree`.
pub fn gauss_rectangle<T: Real>(degree: usize) -> Result<QuadratureRule<T>> {
    check_degree(degree)?;
    let n = (degree + 2) / 2;
    let (x, w) = gauss_legendre::<T>(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            points.push([x[i], x[j]]);
            weights.push(w[i] * w[j]);
        }
    }
    Ok(QuadratureRule { cell: ReferenceCell::Square, degree, points, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_supported_degree_is_exact() {
        for degree in 1..=8 {
            let t = gauss_triangle::<f64>(degree).unwrap();
            let r = gauss_rectangle::<f64>(degree).unwrap();
            assert!(t.exactness_defect() <= 1e-13, "triangle degree {degree}");
            assert!(r.exactness_defect() <= 1e-13, "rectangle degree {degree}");
            assert!((t.weights.iter().sum::<f64>() - 0.5).abs() < 1e-15);
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn centroid_rule() {
        let t = gauss_triangle::<f64>(1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.weights[0], 0.5);
        assert!((t.points[0][0] - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn two_by_two_gauss_on_unit_square() {
        let r = gauss_rectangle::<f64>(3).unwrap();
        assert_eq!(r.len(), 4);
        let a = 0.5 - 0.5 / 3f64.sqrt();
        for (p, &w) in r.points.iter().zip(&r.weights) {
            assert!((w - 0.25).abs() < 1e-15);
            assert!((p[0] - a).abs() < 1e-15 || (p[0] - (1.0 - a)).abs() < 1e-15);
        }
    }

    #[test]
    fn x2y2_on_reference_triangle() {
        let t = gauss_triangle::<f64>(4).unwrap();
        let v: f64 = t.points.iter().zip(&t.weights).map(|(p, w)| w * p[0] * p[0] * p[1] * p[1]).sum();
        assert!((v - 1.0 / 180.0).abs() <= 1e-13);
    }

    #[test]
    fn unsupported_degrees() {
        assert!(matches!(gauss_triangle::<f64>(0), Err(HdmError::UnsupportedDegree(0))));
        assert!(matches!(gauss_rectangle::<f64>(9), Err(HdmError::UnsupportedDegree(9))));
    }

    #[test]
    fn single_precision_rules() {
        let t = gauss_triangle::<f32>(6).unwrap();
        assert!(t.exactness_defect() <= 1e-6);
    }
}
