//! Manufactured clamped-plate solutions with analytic derivatives up to
//! fourth order and the matching biharmonic source terms.

mod gate;
pub mod jet1;
mod lshape;

pub use gate::{fd_bilaplacian, fd_gate, gate_points, FD_STEP};
pub use lshape::{lshape_gamma, LShapeSingular, LSHAPE_GAMMA, LSHAPE_OMEGA};

use crate::error::Result;
use crate::hdm::Jet;
use crate::mesh::Domain;
use crate::scalar::{Mat2, Point, Real};
use jet1::Jet1;

/// `d[i][j] = ∂x^i ∂y^j u` for `i + j ≤ 4`; other entries are unused.
pub type Derivatives<T> = [[T; 5]; 5];

/// Exact data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValues<T> {
    pub u: T,
    pub grad: Point<T>,
    pub hess: Mat2<T>,
    pub lap: T,
    /// `Δ²u`
    pub f: T,
}

impl<T: Real> PointValues<T> {
    pub fn from_derivatives(d: &Derivatives<T>) -> Self {
        Self {
            u: d[0][0],
            grad: [d[1][0], d[0][1]],
            hess: [[d[2][0], d[1][1]], [d[1][1], d[0][2]]],
            lap: d[2][0] + d[0][2],
            f: d[4][0] + T::lit(2.0) * d[2][2] + d[0][4],
        }
    }

    pub fn jet(&self) -> Jet<T> {
        Jet { value: self.u, grad: self.grad, hess: self.hess }
    }
}

pub trait Problem<T: Real>: Send + Sync {
    /// Command-line identifier.
    fn id(&self) -> &'static str;
    fn label(&self) -> &'static str;
    fn domain(&self) -> Domain;
    fn derivatives(&self, x: Point<T>) -> Result<Derivatives<T>>;

    fn eval(&self, x: Point<T>) -> Result<PointValues<T>> {
        Ok(PointValues::from_derivatives(&self.derivatives(x)?))
    }

    fn jet(&self, x: Point<T>) -> Result<Jet<T>> {
        Ok(self.eval(x)?.jet())
    }

    fn source(&self, x: Point<T>) -> Result<T> {
        Ok(self.eval(x)?.f)
    }

    /// `(ℋu, Δ²u)`: a Hessian field together with its double divergence,
    /// which equals `ℋ:BᵀBℋu` for both B variants.
    fn hessian_field(&self, x: Point<T>) -> Result<(Mat2<T>, T)> {
        let v = self.eval(x)?;
        Ok((v.hess, v.f))
    }
}

type Factor<T> = fn(T) -> Jet1<T>;

/// `u(x, y) = Σ a_k(x) b_k(y)`.
pub struct Separable<T> {
    id: &'static str,
    label: &'static str,
    terms: Vec<(Factor<T>, Factor<T>)>,
}

impl<T: Real> Problem<T> for Separable<T> {
    fn id(&self) -> &'static str {
        self.id
    }

    fn label(&self) -> &'static str {
        self.label
    }

    fn domain(&self) -> Domain {
        Domain::UnitSquare
    }

    fn derivatives(&self, x: Point<T>) -> Result<Derivatives<T>> {
        let mut d = [[T::zero(); 5]; 5];
        for (a, b) in &self.terms {
            let (ja, jb) = (a(x[0]), b(x[1]));
            for i in 0..5 {
                for j in 0..5 - i {
                    d[i][j] += ja[i] * jb[j];
                }
            }
        }
        Ok(d)
    }
}

fn sin2<T: Real>(t: T) -> Jet1<T> {
    let s = jet1::sin(T::PI(), t);
    jet1::mul(&s, &s)
}

/// `t²(1−t)²`
fn quartic<T: Real>(t: T) -> Jet1<T> {
    jet1::poly(&[0.0, 0.0, 1.0, -2.0, 1.0], t)
}

/// `t³(1−t)³`
fn sextic<T: Real>(t: T) -> Jet1<T> {
    jet1::poly(&[0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0], t)
}

fn quartic_cos<T: Real>(t: T) -> Jet1<T> {
    jet1::mul(&quartic(t), &jet1::cos(T::TAU(), t))
}

fn quartic_sin<T: Real>(t: T) -> Jet1<T> {
    jet1::mul(&quartic(t), &jet1::sin(T::TAU(), t))
}

fn sextic_exp_trig<T: Real>(t: T) -> Jet1<T> {
    let trig = jet1::add(&jet1::mul(&jet1::exp(t), &jet1::sin(T::TAU(), t)), &jet1::cos(T::TAU(), t));
    jet1::mul(&sextic(t), &trig)
}

/// `sin²(πx) sin²(πy)`
pub fn problem_sq_sin2<T: Real>() -> Separable<T> {
    Separable { id: "sq-sin2", label: "sin²(πx)sin²(πy)", terms: vec![(sin2, sin2)] }
}

/// `x²y²(1−x)²(1−y)²`
pub fn problem_sq_poly<T: Real>() -> Separable<T> {
    Separable { id: "sq-poly", label: "x²y²(1−x)²(1−y)²", terms: vec![(quartic, quartic)] }
}

/// `x²y²(1−x)²(1−y)²(cos 2πx + sin 2πy)`
pub fn problem_sq_trig<T: Real>() -> Separable<T> {
    Separable {
        id: "sq-trig",
        label: "x²y²(1−x)²(1−y)²(cos 2πx + sin 2πy)",
        terms: vec![(quartic_cos, quartic), (quartic, quartic_sin)],
    }
}

/// `x³y³(1−x)³(1−y)³(eˣ sin 2πx + cos 2πx)`
pub fn problem_sq_exp<T: Real>() -> Separable<T> {
    Separable {
        id: "sq-exp",
        label: "x³y³(1−x)³(1−y)³(eˣ sin 2πx + cos 2πx)",
        terms: vec![(sextic_exp_trig, sextic)],
    }
}

pub const PROBLEM_IDS: [&str; 5] = ["sq-sin2", "sq-poly", "sq-trig", "sq-exp", "lshape"];

pub fn problem_by_id<T: Real>(id: &str) -> Option<Box<dyn Problem<T>>> {
    Some(match id {
        "sq-sin2" => Box::new(problem_sq_sin2::<T>()),
        "sq-poly" => Box::new(problem_sq_poly::<T>()),
        "sq-trig" => Box::new(problem_sq_trig::<T>()),
        "sq-exp" => Box::new(problem_sq_exp::<T>()),
        "lshape" => Box::new(LShapeSingular::<T>::new()),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(p: &dyn Problem<f64>, x: f64, y: f64) -> PointValues<f64> {
        p.eval([x, y]).unwrap()
    }

    #[test]
    fn sin2_center_value() {
        assert!((at(&problem_sq_sin2(), 0.5, 0.5).u - 1.0).abs() < 1e-15);
    }

    #[test]
    fn poly_source_closed_form() {
        let p = problem_sq_poly();
        for &(x, y) in &[(0.5, 0.5), (0.2, 0.7), (0.9, 0.05)] {
            let expect = 24.0 * y * y * (1.0 - y) * (1.0 - y)
                + 24.0 * x * x * (1.0 - x) * (1.0 - x)
                + 2.0 * (2.0 - 12.0 * x + 12.0 * x * x) * (2.0 - 12.0 * y + 12.0 * y * y);
            assert!((at(&p, x, y).f - expect).abs() < 1e-12);
        }
        assert!((at(&p, 0.5, 0.5).f - 5.0).abs() < 1e-13);
    }

    #[test]
    fn poly_integral() {
        // ∫₀¹ t²(1−t)² dt = 1/30 in each variable
        let rule = crate::linalg::gauss_rectangle::<f64>(8).unwrap();
        let p = problem_sq_poly();
        let total: f64 = rule.points.iter().zip(&rule.weights).map(|(x, w)| w * at(&p, x[0], x[1]).u).sum();
        assert!((total - 1.0 / 900.0).abs() < 1e-16);
    }

    #[test]
    fn trig_center_value() {
        // (1/2)⁸ (cos π + sin π)
        assert!((at(&problem_sq_trig(), 0.5, 0.5).u + 1.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn clamped_on_the_unit_square() {
        let problems: Vec<Box<dyn Problem<f64>>> =
            ["sq-sin2", "sq-poly", "sq-trig", "sq-exp"].iter().map(|id| problem_by_id(id).unwrap()).collect();
        for p in &problems {
            for k in 0..=50 {
                let t = k as f64 / 50.0;
                for x in [[0.0, t], [1.0, t], [t, 0.0], [t, 1.0]] {
                    let v = p.eval(x).unwrap();
                    assert!(v.u.abs() < 1e-12 && v.grad[0].abs() < 1e-12 && v.grad[1].abs() < 1e-12, "{}", p.id());
                }
            }
        }
    }

    #[test]
    fn laplacian_is_trace_of_symmetric_hessian() {
        for id in PROBLEM_IDS {
            let p = problem_by_id::<f64>(id).unwrap();
            let v = p.eval([-0.3, 0.4].map(|c: f64| if id == "lshape" { c } else { c.abs() })).unwrap();
            assert_eq!(v.hess[0][1], v.hess[1][0]);
            assert!((v.lap - v.hess[0][0] - v.hess[1][1]).abs() <= 1e-12 * v.lap.abs().max(1.0));
        }
    }

    #[test]
    fn registry() {
        for id in PROBLEM_IDS {
            assert_eq!(problem_by_id::<f64>(id).unwrap().id(), id);
        }
        assert!(problem_by_id::<f64>("nope").is_none());
    }
}
