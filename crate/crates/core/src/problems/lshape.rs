//! The corner-singular solution on the L-shaped domain `(−1,1)² \ [0,1)×(−1,0]`:
//! `u = (x²−1)²(y²−1)² r^{1+γ} g(θ)` with `θ ∈ [0, 3π/2]`.

use super::jet1::{binomial, poly};
use super::{Derivatives, Problem};
use crate::error::{HdmError, Result};
use crate::mesh::Domain;
use crate::scalar::{Point, Real};

/// Tabulated root of `sin²(γω) = γ² sin²ω` for `ω = 3π/2`.
pub const LSHAPE_GAMMA: f64 = 0.5444837367;
pub const LSHAPE_OMEGA: f64 = 1.5 * std::f64::consts::PI;

/// The tabulated root after one Newton step on `sin²(γω) − γ² sin²ω`.
pub fn lshape_gamma<T: Real>() -> T {
    let omega = T::lit(LSHAPE_OMEGA);
    let g = T::lit(LSHAPE_GAMMA);
    let s2 = omega.sin().powi(2);
    let f = (g * omega).sin().powi(2) - g * g * s2;
    let df = omega * (T::lit(2.0) * g * omega).sin() - T::lit(2.0) * g * s2;
    g - f / df
}

const MIN_RADIUS: f64 = 1e-12;

/// A function `r^β k(θ)` known through the θ-derivatives of `k` at one angle.
#[derive(Debug, Clone)]
struct Angular<T> {
    beta: T,
    k: Vec<T>,
}

impl<T: Real> Angular<T> {
    /// `∂x` if `along_x`, else `∂y`; the result carries one derivative fewer.
    fn differentiate(&self, theta: T, along_x: bool) -> Self {
        let m = self.k.len() - 1;
        let half_pi = T::FRAC_PI_2();
        // n-th derivatives of cos θ and sin θ
        let cos_n = |n: usize| (theta + T::from_usize_lossy(n) * half_pi).cos();
        let sin_n = |n: usize| (theta + T::from_usize_lossy(n) * half_pi).sin();
        let k = (0..m)
            .map(|n| {
                (0..=n)
                    .map(|j| {
                        let c = T::from_usize_lossy(binomial(n, j));
                        let term = if along_x {
                            self.beta * self.k[j] * cos_n(n - j) - self.k[j + 1] * sin_n(n - j)
                        } else {
                            self.beta * self.k[j] * sin_n(n - j) + self.k[j + 1] * cos_n(n - j)
                        };
                        c * term
                    })
                    .sum()
            })
            .collect();
        Self { beta: self.beta - T::one(), k }
    }

    fn value(&self, r: T) -> T {
        r.powf(self.beta) * self.k[0]
    }
}

#[derive(Debug, Clone)]
pub struct LShapeSingular<T> {
    pub gamma: T,
    pub omega: T,
    a: T,
    b: T,
}

impl<T: Real> Default for LShapeSingular<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> LShapeSingular<T> {
    pub fn new() -> Self {
        let gamma = lshape_gamma::<T>();
        let omega = T::lit(LSHAPE_OMEGA);
        let (m, p) = (gamma - T::one(), gamma + T::one());
        let a = (m * omega).sin() / m - (p * omega).sin() / p;
        let b = (m * omega).cos() - (p * omega).cos();
        Self { gamma, omega, a, b }
    }

    /// `g^{(n)}(θ)` for `n = 0..=4`.
    pub fn angular(&self, theta: T) -> [T; 5] {
        let (m, p) = (self.gamma - T::one(), self.gamma + T::one());
        let mut out = [T::zero(); 5];
        for (n, slot) in out.iter_mut().enumerate() {
            let shift = T::from_usize_lossy(n) * T::FRAC_PI_2();
            let ni = n as i32;
            let cosines = m.powi(ni) * (m * theta + shift).cos() - p.powi(ni) * (p * theta + shift).cos();
            let sines = m.powi(ni - 1) * (m * theta + shift).sin() - p.powi(ni - 1) * (p * theta + shift).sin();
            *slot = self.a * cosines - self.b * sines;
        }
        out
    }

    /// Polar coordinates with `θ ∈ [0, 2π)`.
    pub fn polar(x: Point<T>) -> (T, T) {
        let r = x[0].hypot(x[1]);
        let mut theta = x[1].atan2(x[0]);
        if theta < T::zero() {
            theta += T::TAU();
        }
        (r, theta)
    }

    /// `∂x^i ∂y^j` of the singular factor `r^{1+γ} g(θ)`.
    pub fn singular_derivatives(&self, x: Point<T>) -> Result<Derivatives<T>> {
        let (r, theta) = Self::polar(x);
        if r.as_f64() < MIN_RADIUS {
            return Err(HdmError::EvaluationNearSingularity { r: r.as_f64() });
        }
        let mut d = [[T::zero(); 5]; 5];
        let mut along_x = Angular { beta: T::one() + self.gamma, k: self.angular(theta).to_vec() };
        for i in 0..5 {
            let mut f = along_x.clone();
            for j in 0..5 - i {
                d[i][j] = f.value(r);
                if j + 1 < 5 - i {
                    f = f.differentiate(theta, false);
                }
            }
            if i < 4 {
                along_x = along_x.differentiate(theta, true);
            }
        }
        Ok(d)
    }
}

impl<T: Real> Problem<T> for LShapeSingular<T> {
    fn id(&self) -> &'static str {
        "lshape"
    }

    fn label(&self) -> &'static str {
        "(x²−1)²(y²−1)² r^{1+γ} g(θ)"
    }

    fn domain(&self) -> Domain {
        Domain::LShape
    }

    fn derivatives(&self, x: Point<T>) -> Result<Derivatives<T>> {
        let s = self.singular_derivatives(x)?;
        let bump = [1.0, 0.0, -2.0, 0.0, 1.0];
        let (px, py) = (poly(&bump, x[0]), poly(&bump, x[1]));
        let mut d = [[T::zero(); 5]; 5];
        for i in 0..5 {
            for j in 0..5 - i {
                let mut acc = T::zero();
                for k in 0..=i {
                    for l in 0..=j {
                        let c = T::from_usize_lossy(binomial(i, k) * binomial(j, l));
                        acc += c * px[k] * py[l] * s[i - k][j - l];
                    }
                }
                d[i][j] = acc;
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_is_a_root() {
        let g: f64 = lshape_gamma();
        let w = LSHAPE_OMEGA;
        assert!(((g * w).sin().powi(2) - g * g * w.sin().powi(2)).abs() < 1e-9);
        assert!((g - LSHAPE_GAMMA).abs() < 1e-9);
    }

    #[test]
    fn angular_factor_is_clamped_on_both_rays() {
        let p = LShapeSingular::<f64>::new();
        for theta in [0.0, LSHAPE_OMEGA] {
            let g = p.angular(theta);
            assert!(g[0].abs() < 1e-12 && g[1].abs() < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn singular_factor_laplacian_matches_polar_formula() {
        // ΔS = r^{α−2}(α²g + g''), Δ²S = 0
        let p = LShapeSingular::<f64>::new();
        let alpha = 1.0 + p.gamma;
        for x in [[0.3, 0.4], [-0.5, 0.2], [-0.4, -0.7], [0.6, 0.01]] {
            let d = p.singular_derivatives(x).unwrap();
            let (r, t) = LShapeSingular::polar(x);
            let g = p.angular(t);
            let lap = r.powf(alpha - 2.0) * (alpha * alpha * g[0] + g[2]);
            assert!((d[2][0] + d[0][2] - lap).abs() < 1e-12 * lap.abs().max(1.0));
            let bilap = d[4][0] + 2.0 * d[2][2] + d[0][4];
            assert!(bilap.abs() < 1e-10 * r.powf(alpha - 4.0), "{bilap}");
        }
    }

    #[test]
    fn first_derivatives_match_chain_rule() {
        let p = LShapeSingular::<f64>::new();
        let x = [-0.35, 0.6];
        let d = p.singular_derivatives(x).unwrap();
        let (r, t) = LShapeSingular::polar(x);
        let g = p.angular(t);
        let beta = 1.0 + p.gamma;
        let dx = r.powf(beta - 1.0) * (beta * g[0] * t.cos() - g[1] * t.sin());
        let dy = r.powf(beta - 1.0) * (beta * g[0] * t.sin() + g[1] * t.cos());
        assert!((d[1][0] - dx).abs() < 1e-14 && (d[0][1] - dy).abs() < 1e-14);
    }

    #[test]
    fn vanishes_on_the_outer_boundary() {
        let p = LShapeSingular::<f64>::new();
        for k in 0..=40 {
            let t = -1.0 + k as f64 / 20.0;
            for x in [[-1.0, t], [t, 1.0]] {
                let v = p.eval(x).unwrap();
                assert!(v.u.abs() < 1e-10 && v.grad[0].abs() < 1e-10 && v.grad[1].abs() < 1e-10);
            }
        }
        // re-entrant edges: θ = 0 and θ = 3π/2
        for k in 1..=10 {
            let s = k as f64 / 10.0;
            for x in [[s, 0.0], [0.0, -s]] {
                let v = p.eval(x).unwrap();
                assert!(v.u.abs() < 1e-10 && v.grad[0].abs() < 1e-10 && v.grad[1].abs() < 1e-10, "{x:?} {v:?}");
            }
        }
    }

    #[test]
    fn corner_is_rejected() {
        let p = LShapeSingular::<f64>::new();
        assert!(matches!(p.eval([0.0, 0.0]), Err(HdmError::EvaluationNearSingularity { .. })));
    }
}
