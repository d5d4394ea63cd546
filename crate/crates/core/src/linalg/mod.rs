//! Sparse symmetric systems, a Jacobi-preconditioned conjugate gradient
//! solver, small dense solves, and quadrature on the reference cells.

mod cg;
pub mod dense;
pub mod quadrature;
mod sparse;

pub use cg::{solve_spd, solve_spd_from, CgOptions, CgReport};
pub use dense::DenseMatrix;
pub use quadrature::{gauss_legendre, gauss_rectangle, gauss_triangle, QuadratureRule, ReferenceCell};
pub use sparse::{CsrMatrix, SparseSystem, TripletBuilder};
