use crate::scalar::{Point, Real};

/// Complete quadratics.
pub const P2_EXPONENTS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// `P₃ ⊕ {ξ³η, ξη³}`.
pub const ADINI_EXPONENTS: [(u32, u32); 12] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (3, 1),
    (1, 3),
];

#[derive(Debug, Clone)]
pub struct MonomialSet {
    exponents: Vec<(u32, u32)>,
}

/// Monomials and their derivatives up to second order at one point.
pub struct MonomialValues<T> {
    pub value: Vec<T>,
    pub dx: Vec<T>,
    pub dy: Vec<T>,
    pub dxx: Vec<T>,
    pub dxy: Vec<T>,
    pub dyy: Vec<T>,
}

fn power<T: Real>(t: T, e: u32, d: u32) -> T {
    if d > e {
        return T::zero();
    }
    let falling = ((e - d + 1)..=e).product::<u32>();
    T::from_usize_lossy(falling as usize) * t.powi((e - d) as i32)
}

impl MonomialSet {
    pub fn new(exponents: &[(u32, u32)]) -> Self {
        Self { exponents: exponents.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn eval<T: Real>(&self, p: Point<T>) -> MonomialValues<T> {
        let d = |dx: u32, dy: u32| -> Vec<T> {
            self.exponents.iter().map(|&(a, b)| power(p[0], a, dx) * power(p[1], b, dy)).collect()
        };
        MonomialValues { value: d(0, 0), dx: d(1, 0), dy: d(0, 1), dxx: d(2, 0), dxy: d(1, 1), dyy: d(0, 2) }
    }
}
