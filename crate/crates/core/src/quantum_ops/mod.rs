//! Quantum states, Lindblad generators and admissibility audits.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Superoperators act on
//! column-stacked vectorizations: vec(X)[i + d·j] = X[(i, j)], so that
//! vec(A X B) = (Bᵀ ⊗ A) vec(X). This coincides with nalgebra's column-major
//! storage, which makes `vec`/`unvec` plain reshapes.

mod audit;
mod lindblad;
mod state;

use thiserror::Error;

pub use audit::{admissibility_report, choi_matrix, AdmissibilityReport, AuditTolerances, StepDefects};
pub use lindblad::{lindblad_apply, lindblad_superoperator, LindbladModel, MapKind, MapMatrix};
pub use state::{
    hermitian_eigenvalues, hermiticity_defect, l1_coherence, min_hermitian_eigenvalue, unvec, vec, DensityMatrix,
};

/// Tolerance on Hermiticity, trace and positivity checks at construction.
pub const STATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map matrix side {0} is not a perfect square")]
    NotPerfectSquare(usize),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    TraceNotUnit(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("the Choi matrix is defined for propagators, not generators")]
    GeneratorNotPropagator,
}
