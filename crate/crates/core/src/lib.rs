//! Hessian discretisations of the clamped biharmonic problem `Δ²u = f`.
//!
//! Every discretisation (Morley, Adini, the Δ-adapted and modified finite
//! volume schemes, gradient recovery) implements [`hdm::Discretisation`] and
//! shares one assembly, solver and diagnostics pipeline. Numerics are generic
//! over [`Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod error;
pub mod fem;
pub mod fvm;
pub mod gr;
pub mod hdm;
pub mod linalg;
pub mod mesh;
pub mod problems;
pub mod scalar;
pub mod study;

pub use error::{HdmError, Result};
pub use scalar::Real;

pub type Point = scalar::Point<f64>;
pub type Mat2 = scalar::Mat2<f64>;
pub type Mesh = mesh::Mesh<f64>;
pub type CsrMatrix = linalg::CsrMatrix<f64>;
pub type DenseMatrix = linalg::DenseMatrix<f64>;
pub type CgOptions = linalg::CgOptions<f64>;
pub type FemOps<'m> = fem::FemOps<'m, f64>;
pub type FvmOps<'m> = fvm::FvmOps<'m, f64>;
pub type GrOps<'m> = gr::GrOps<'m, f64>;
pub type ErrorNorms = hdm::ErrorNorms<f64>;
pub type DiscreteSolution = hdm::DiscreteSolution<f64>;
