use thiserror::Error;

#[derive(Debug, Error)]
pub enum HdmError {
    #[error("face {face} has center-to-center distance {distance:e}; two-point fluxes are undefined")]
    DegenerateFace { face: usize, distance: f64 },

    #[error("mesh is not Δ-adapted: {} faces violate orthogonality (first: {:?})", faces.len(), faces.first())]
    NotAdmissible { faces: Vec<usize> },

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("non-positive curvature pᵀAp = {curvature:e} at iteration {iteration}")]
    NonPositiveCurvature { iteration: usize, curvature: f64 },

    #[error("no quadrature rule of degree {0} (supported: 1..=8)")]
    UnsupportedDegree(usize),

    #[error("the discrete space has no free degrees of freedom")]
    EmptyConstrainedSpace,

    #[error("cell {0} is not a triangle")]
    NotTriangular(usize),

    #[error("cell {0} is not an axis-aligned rectangle")]
    NotRectangular(usize),

    #[error("stabilisation factor must be positive and finite, got {0}")]
    InvalidRho(f64),

    #[error("power iteration stalled after {iterations} iterations (last relative change {change:e})")]
    PowerIterationStalled { iterations: usize, change: f64 },

    #[error("derivatives requested at r = {r:e}, too close to the re-entrant corner")]
    EvaluationNearSingularity { r: f64 },

    #[error("scheme {scheme} cannot run on {mesh}")]
    IncompatibleSchemeMesh { scheme: String, mesh: String },

    #[error("local dof matrix of cell {cell} is singular")]
    SingularLocalMatrix { cell: usize },

    #[error("problem {problem}: source term disagrees with finite-difference bilaplacian at ({x}, {y}) (relative error {error:e})")]
    InconsistentProblem { problem: String, x: f64, y: f64, error: f64 },

    #[error("mesh file line {line}: {message}")]
    MeshFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = HdmError> = std::result::Result<T, E>;
