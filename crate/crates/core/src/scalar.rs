//! Floating point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the discretisations are generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; every literal used by the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Point or vector in the plane.
pub type Point<T> = [T; 2];

/// Dense 2×2 matrix, row major.
pub type Mat2<T> = [[T; 2]; 2];

#[inline]
pub fn sub<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale<T: Real>(s: T, a: Point<T>) -> Point<T> {
    [s * a[0], s * a[1]]
}

#[inline]
pub fn dot<T: Real>(a: Point<T>, b: Point<T>) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross<T: Real>(a: Point<T>, b: Point<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm<T: Real>(a: Point<T>) -> T {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist<T: Real>(a: Point<T>, b: Point<T>) -> T {
    norm(sub(a, b))
}

#[inline]
pub fn mat_zero<T: Real>() -> Mat2<T> {
    [[T::zero(); 2]; 2]
}

#[inline]
pub fn mat_add<T: Real>(a: Mat2<T>, b: Mat2<T>) -> Mat2<T> {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

#[inline]
pub fn mat_sub<T: Real>(a: Mat2<T>, b: Mat2<T>) -> Mat2<T> {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

#[inline]
pub fn mat_scale<T: Real>(s: T, a: Mat2<T>) -> Mat2<T> {
    [[s * a[0][0], s * a[0][1]], [s * a[1][0], s * a[1][1]]]
}

/// Frobenius inner product `a : b`.
#[inline]
pub fn frobenius<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> T {
    a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
}

#[inline]
pub fn trace<T: Real>(a: &Mat2<T>) -> T {
    a[0][0] + a[1][1]
}

/// Outer product `a ⊗ b` with entries `a_i b_j`.
#[inline]
pub fn outer<T: Real>(a: Point<T>, b: Point<T>) -> Mat2<T> {
    [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]]
}
