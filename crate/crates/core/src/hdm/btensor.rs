use std::fmt;

use crate::scalar::{Mat2, Real};

/// The linear map `ξ ↦ Bξ` on symmetric 2×2 matrices; the fourth-order
/// operator is `ℋ:BᵀBℋ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BTensor {
    /// `Bξ = ξ`
    #[default]
    Identity,
    /// `Bξ = tr(ξ)/√2 · Id`, so that `Bξ:Bφ = tr ξ · tr φ`.
    TraceLaplacian,
}

impl BTensor {
    pub fn apply<T: Real>(self, xi: &Mat2<T>) -> Mat2<T> {
        match self {
            BTensor::Identity => *xi,
            BTensor::TraceLaplacian => {
                let s = (xi[0][0] + xi[1][1]) / T::SQRT_2();
                [[s, T::zero()], [T::zero(), s]]
            }
        }
    }

    /// `BᵀBξ`.
    pub fn gram<T: Real>(self, xi: &Mat2<T>) -> Mat2<T> {
        match self {
            BTensor::Identity => *xi,
            BTensor::TraceLaplacian => {
                let t = xi[0][0] + xi[1][1];
                [[t, T::zero()], [T::zero(), t]]
            }
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            BTensor::Identity => "identity",
            BTensor::TraceLaplacian => "laplacian",
        }
    }
}

impl fmt::Display for BTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for BTensor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(BTensor::Identity),
            "laplacian" => Ok(BTensor::TraceLaplacian),
            other => Err(format!("unknown B tensor `{other}` (expected identity or laplacian)")),
        }
    }
}
