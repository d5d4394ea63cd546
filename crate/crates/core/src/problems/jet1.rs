//! Functions of one variable carried with their first four derivatives.

use crate::scalar::Real;

/// `[f, f', f'', f''', f'''']` at one point.
pub type Jet1<T> = [T; 5];

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Leibniz rule.
pub fn mul<T: Real>(a: &Jet1<T>, b: &Jet1<T>) -> Jet1<T> {
    let mut out = [T::zero(); 5];
    for (n, slot) in out.iter_mut().enumerate() {
        for k in 0..=n {
            *slot += T::from_usize_lossy(binomial(n, k)) * a[k] * b[n - k];
        }
    }
    out
}

pub fn add<T: Real>(a: &Jet1<T>, b: &Jet1<T>) -> Jet1<T> {
    let mut out = *a;
    for i in 0..5 {
        out[i] += b[i];
    }
    out
}

/// `Σ c_k t^k`.
pub fn poly<T: Real>(coeffs: &[f64], t: T) -> Jet1<T> {
    let mut out = [T::zero(); 5];
    for (d, slot) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for k in (d..coeffs.len()).rev() {
            let falling = ((k - d + 1)..=k).product::<usize>();
            acc = acc * t + T::lit(coeffs[k]) * T::from_usize_lossy(falling);
        }
        *slot = acc;
    }
    out
}

/// `sin(ωt)` and derivatives.
pub fn sin<T: Real>(omega: T, t: T) -> Jet1<T> {
    let (s, c) = (omega * t).sin_cos();
    let w = [T::one(), omega, omega * omega, omega * omega * omega, omega * omega * omega * omega];
    [s, w[1] * c, -w[2] * s, -w[3] * c, w[4] * s]
}

/// `cos(ωt)` and derivatives.
pub fn cos<T: Real>(omega: T, t: T) -> Jet1<T> {
    let (s, c) = (omega * t).sin_cos();
    let w = [T::one(), omega, omega * omega, omega * omega * omega, omega * omega * omega * omega];
    [c, -w[1] * s, -w[2] * c, w[3] * s, w[4] * c]
}

pub fn exp<T: Real>(t: T) -> Jet1<T> {
    [t.exp(); 5]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        // t²(1−t)² = t² − 2t³ + t⁴
        let q = poly(&[0.0, 0.0, 1.0, -2.0, 1.0], 0.3f64);
        let t = 0.3f64;
        let expect = [
            t * t * (1.0 - t) * (1.0 - t),
            2.0 * t - 6.0 * t * t + 4.0 * t * t * t,
            2.0 - 12.0 * t + 12.0 * t * t,
            -12.0 + 24.0 * t,
            24.0,
        ];
        for i in 0..5 {
            assert!((q[i] - expect[i]).abs() < 1e-14, "{i}: {} vs {}", q[i], expect[i]);
        }
    }

    #[test]
    fn product_of_sines_is_squared_sine() {
        let pi = std::f64::consts::PI;
        let t = 0.17;
        let s = sin(pi, t);
        let s2 = mul(&s, &s);
        let expect = [
            (pi * t).sin().powi(2),
            pi * (2.0 * pi * t).sin(),
            2.0 * pi * pi * (2.0 * pi * t).cos(),
            -4.0 * pi.powi(3) * (2.0 * pi * t).sin(),
            -8.0 * pi.powi(4) * (2.0 * pi * t).cos(),
        ];
        for i in 0..5 {
            assert!((s2[i] - expect[i]).abs() < 1e-11 * expect[i].abs().max(1.0));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 3), 1);
    }
}
